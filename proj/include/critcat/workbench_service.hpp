#pragma once

// HTTP API for the workbench UI. Workbench holds the resources and answers
// requests; WorkbenchServer binds it to cpp-httplib.
//
// Routes:
//   GET  /catalogues                      list
//   POST /catalogues                      import a document or {"fixture": name}
//   GET  /catalogues/{id}                 document + validation + stats
//   POST /catalogues/{id}/directives      append directives (If-Match required)
//   GET  /solutions, GET /solutions/{name}
//   POST /solutions                       create profile
//   PUT  /solutions[/{name}]              upsert profile (If-Match optional)
//   GET  /comparisons?catalogue=&solutions=a,b[&version=]
//   POST /whatif                          ephemeral perturbation analysis
//
// Every mutable resource carries a version exposed as a quoted ETag. A
// mutation citing a stale version fails with 409 and changes nothing.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "critcat/catalogue_model.hpp"
#include "critcat/scoring_engine.hpp"

namespace httplib {
class Server;
}

namespace critcat {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // keys lower-case
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::map<std::string, std::string> headers;
};

class Workbench {
 public:
  struct Options {
    /// When set, every change is written through to documents under this
    /// directory (catalogues/, solutions/).
    std::optional<std::filesystem::path> snapshot_dir;
  };

  Workbench();
  explicit Workbench(Options options);

  ApiResponse handle(const ApiRequest& request);

  /// Digest over every stored resource; unchanged by read-only requests.
  std::string state_digest() const;

 private:
  struct CatalogueRecord {
    std::shared_ptr<const Catalogue> catalogue;
    std::optional<std::string> parent;
    std::optional<std::string> child;
    std::vector<Directive> pending;  // directives applied to derive the child
  };
  struct SolutionRecord {
    std::shared_ptr<const SolutionProfile> profile;
    std::uint64_t version = 1;
  };

  ApiResponse list_catalogues() const;
  ApiResponse create_catalogue(const ApiRequest& request);
  ApiResponse get_catalogue(const std::string& id) const;
  ApiResponse post_directives(const std::string& id, const ApiRequest& request);
  ApiResponse list_solutions() const;
  ApiResponse get_solution(const std::string& name) const;
  ApiResponse put_solution(const ApiRequest& request, bool create_only, const std::string& path_name);
  ApiResponse get_comparison(const ApiRequest& request) const;
  ApiResponse post_whatif(const ApiRequest& request) const;

  void snapshot_catalogue(const std::string& id) const;
  void snapshot_solution(const std::string& name) const;

  Options options_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, CatalogueRecord> catalogues_;
  std::map<std::string, SolutionRecord> solutions_;
};

class WorkbenchServer {
 public:
  struct Options {
    std::string bind = "127.0.0.1";
    int port = 8080;
    std::string cors_origin = "*";
  };

  WorkbenchServer(Workbench& workbench, Options options);
  ~WorkbenchServer();

  WorkbenchServer(const WorkbenchServer&) = delete;
  WorkbenchServer& operator=(const WorkbenchServer&) = delete;

  /// Blocks until stop().
  bool listen();
  /// Binds to an ephemeral port and returns it (or -1); follow with listen_after_bind().
  int bind_to_any_port();
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  Workbench& workbench_;
  Options options_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace critcat
