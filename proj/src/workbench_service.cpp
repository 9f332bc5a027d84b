#include "critcat/workbench_service.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <sstream>

#include "critcat/catalogue_store.hpp"
#include "critcat/layer_engine.hpp"

namespace critcat {

using nlohmann::json;

namespace {

ApiResponse json_response(int status, const json& body) {
  return ApiResponse{status, dump_canonical(body), {{"Content-Type", "application/json"}}};
}

json issues_json(const std::vector<Issue>& issues) {
  json arr = json::array();
  for (const auto& i : issues)
    arr.push_back(json{{"code", i.code}, {"index", i.index ? json(i.index->str()) : json(nullptr)}, {"message", i.message}});
  return arr;
}

ApiResponse error_response(int status, std::string_view code, const std::string& message,
                           const std::vector<Issue>& issues = {}) {
  return json_response(status, json{{"error", std::string(code)}, {"message", message}, {"issues", issues_json(issues)}});
}

ApiResponse from_error(const Error& e, int status) { return error_response(status, e.code(), e.what(), e.issues()); }

std::string etag(std::uint64_t version) { return "\"" + std::to_string(version) + "\""; }

ApiResponse with_etag(ApiResponse response, std::uint64_t version) {
  response.headers["ETag"] = etag(version);
  return response;
}

/// Accepts `"3"`, `W/"3"` or `3`.
std::optional<std::uint64_t> parse_version(std::string text) {
  if (text.rfind("W/", 0) == 0) text = text.substr(2);
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = text.substr(1, text.size() - 2);
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  try {
    return std::stoull(text);
  } catch (...) {
    return std::nullopt;
  }
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : path) {
    if (c == '/') {
      if (!current.empty()) parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(current);
  return parts;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

std::string file_safe(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

json catalogue_summary(const Catalogue& c) {
  return json{{"id", c.id},
              {"layer", c.layer},
              {"title", c.title},
              {"version", c.version},
              {"criteria_count", c.criteria.size()}};
}

json stats_or_null(const Catalogue& c) {
  if (c.layer != 3) return nullptr;
  try {
    return to_json(catalogue_stats(c));
  } catch (const Error&) {
    return nullptr;
  }
}

std::optional<std::uint64_t> pinned_version(const ApiRequest& request) {
  if (auto it = request.headers.find("if-match"); it != request.headers.end()) return parse_version(it->second);
  if (auto it = request.query.find("version"); it != request.query.end()) return parse_version(it->second);
  return std::nullopt;
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t hash = 1469598103934665603ULL) {
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace

Workbench::Workbench() : Workbench(Options{}) {}

Workbench::Workbench(Options options) : options_(std::move(options)) {}

ApiResponse Workbench::handle(const ApiRequest& request) {
  const auto parts = split_path(request.path);
  const auto& method = request.method;
  try {
    if (method == "OPTIONS") return ApiResponse{204, "", {}};
    if (!parts.empty() && parts[0] == "catalogues") {
      if (parts.size() == 1 && method == "GET") return list_catalogues();
      if (parts.size() == 1 && method == "POST") return create_catalogue(request);
      if (parts.size() == 2 && method == "GET") return get_catalogue(parts[1]);
      if (parts.size() == 3 && parts[2] == "directives" && method == "POST") return post_directives(parts[1], request);
      if (parts.size() <= 3) return error_response(405, "method-not-allowed", method + " " + request.path);
    }
    if (!parts.empty() && parts[0] == "solutions") {
      if (parts.size() == 1 && method == "GET") return list_solutions();
      if (parts.size() == 1 && method == "POST") return put_solution(request, true, "");
      if (parts.size() == 1 && method == "PUT") return put_solution(request, false, "");
      if (parts.size() == 2 && method == "GET") return get_solution(parts[1]);
      if (parts.size() == 2 && method == "PUT") return put_solution(request, false, parts[1]);
      if (parts.size() <= 2) return error_response(405, "method-not-allowed", method + " " + request.path);
    }
    if (parts.size() == 1 && parts[0] == "comparisons") {
      if (method == "GET") return get_comparison(request);
      return error_response(405, "method-not-allowed", method + " " + request.path);
    }
    if (parts.size() == 1 && parts[0] == "whatif") {
      if (method == "POST") return post_whatif(request);
      return error_response(405, "method-not-allowed", method + " " + request.path);
    }
    return error_response(404, "not-found", "no route for " + request.path);
  } catch (const StoreError& e) {
    if (e.code() == store_error::kValidationFailure) {
      auto response = from_error(e, 422);
      auto body = json::parse(response.body);
      body["report"] = to_json(e.report);
      return json_response(422, body);
    }
    return from_error(e, e.code() == store_error::kIo ? 500 : 400);
  } catch (const Error& e) {
    return from_error(e, 422);
  } catch (const std::exception& e) {
    return error_response(500, "internal-error", e.what());
  }
}

std::string Workbench::state_digest() const {
  std::shared_lock lock(mutex_);
  std::uint64_t hash = fnv1a("");
  for (const auto& [id, record] : catalogues_) {
    hash = fnv1a(serialize_catalogue(*record.catalogue), hash);
    hash = fnv1a(serialize_script(DerivationScript{record.catalogue->layer + 1, record.pending}), hash);
    hash = fnv1a(record.parent.value_or("-") + "|" + record.child.value_or("-"), hash);
  }
  for (const auto& [name, record] : solutions_) {
    hash = fnv1a(serialize_profile(*record.profile), hash);
    hash = fnv1a(std::to_string(record.version), hash);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

// ---------------------------------------------------------------------------
// Catalogues
// ---------------------------------------------------------------------------

ApiResponse Workbench::list_catalogues() const {
  std::shared_lock lock(mutex_);
  json arr = json::array();
  for (const auto& [id, record] : catalogues_) {
    auto summary = catalogue_summary(*record.catalogue);
    summary["parent"] = record.parent ? json(*record.parent) : json(nullptr);
    summary["child"] = record.child ? json(*record.child) : json(nullptr);
    arr.push_back(std::move(summary));
  }
  return json_response(200, json{{"catalogues", std::move(arr)}});
}

ApiResponse Workbench::create_catalogue(const ApiRequest& request) {
  const json body = parse_json(request.body);
  Catalogue catalogue;
  if (body.is_object() && body.contains("fixture")) {
    if (!body.at("fixture").is_string()) return error_response(400, store_error::kMalformed, "fixture must be a string");
    const auto name = body.at("fixture").get<std::string>();
    const auto& fixtures = load_fixtures();
    if (name == "general") {
      catalogue = fixtures.general_catalogue;
    } else if (name == "maas-expected-layer3") {
      catalogue = fixtures.maas_expected_layer3;
    } else {
      return error_response(404, "unknown-fixture", "no fixture named '" + name + "'");
    }
    if (body.contains("id")) {
      if (!body.at("id").is_string()) return error_response(400, store_error::kMalformed, "id must be a string");
      catalogue.id = body.at("id").get<std::string>();
    }
  } else {
    catalogue = catalogue_from_json(body);
  }
  if (catalogue.id.empty()) return error_response(400, store_error::kMalformed, "catalogue id is empty");

  auto report = validate_catalogue(catalogue);
  if (!report.ok()) {
    auto response = error_response(422, store_error::kValidationFailure, "catalogue fails validation");
    auto j = json::parse(response.body);
    j["report"] = to_json(report);
    return json_response(422, j);
  }

  std::unique_lock lock(mutex_);
  if (catalogues_.count(catalogue.id))
    return error_response(409, "already-exists", "catalogue '" + catalogue.id + "' already exists");
  if (catalogue.version == 0) catalogue.version = 1;
  auto stored = std::make_shared<const Catalogue>(std::move(catalogue));
  catalogues_[stored->id] = CatalogueRecord{stored, std::nullopt, std::nullopt, {}};
  snapshot_catalogue(stored->id);

  auto summary = catalogue_summary(*stored);
  summary["validation"] = to_json(report);
  summary["stats"] = stats_or_null(*stored);
  auto response = with_etag(json_response(201, summary), stored->version);
  response.headers["Location"] = "/catalogues/" + stored->id;
  return response;
}

ApiResponse Workbench::get_catalogue(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = catalogues_.find(id);
  if (it == catalogues_.end()) return error_response(404, "not-found", "no catalogue '" + id + "'");
  const auto catalogue = it->second.catalogue;
  json pending = json::array();
  for (const auto& d : it->second.pending) pending.push_back(to_json(d));
  json body{{"document", to_json(*catalogue)},
            {"validation", to_json(validate_catalogue(*catalogue))},
            {"stats", stats_or_null(*catalogue)},
            {"version", catalogue->version},
            {"parent", it->second.parent ? json(*it->second.parent) : json(nullptr)},
            {"child", it->second.child ? json(*it->second.child) : json(nullptr)},
            {"pending_directives", std::move(pending)}};
  return with_etag(json_response(200, body), catalogue->version);
}

ApiResponse Workbench::post_directives(const std::string& id, const ApiRequest& request) {
  const json body = parse_json(request.body);
  if (!body.is_object() || !body.contains("directives") || !body.at("directives").is_array())
    return error_response(400, store_error::kMalformed, "body needs a 'directives' array");
  std::vector<Directive> batch;
  const auto& arr = body.at("directives");
  for (std::size_t i = 0; i < arr.size(); ++i) batch.push_back(directive_from_json(arr[i], "/directives/" + std::to_string(i)));
  bool finalize = false;
  if (body.contains("finalize")) {
    if (!body.at("finalize").is_boolean()) return error_response(400, store_error::kMalformed, "finalize must be boolean");
    finalize = body.at("finalize").get<bool>();
  }

  auto if_match = request.headers.find("if-match");
  if (if_match == request.headers.end())
    return error_response(428, "precondition-required", "directive batches must carry If-Match with the current version");
  const auto cited = parse_version(if_match->second);
  if (!cited) return error_response(400, store_error::kMalformed, "If-Match is not a version");

  std::unique_lock lock(mutex_);
  auto it = catalogues_.find(id);
  if (it == catalogues_.end()) return error_response(404, "not-found", "no catalogue '" + id + "'");
  auto& record = it->second;
  const auto& parent = *record.catalogue;
  if (*cited != parent.version)
    return with_etag(error_response(409, "stale-version",
                                    "catalogue '" + id + "' is at version " + std::to_string(parent.version) +
                                        ", request cited " + std::to_string(*cited)),
                     parent.version);
  if (parent.layer == 3) throw WrongLayerError(2, 3);

  std::vector<Directive> candidate = record.pending;
  candidate.insert(candidate.end(), batch.begin(), batch.end());
  for (const auto& d : batch) {
    const bool allowed = parent.layer == 1 ? is_refinement(d) : (is_weighting(d) || std::holds_alternative<ScaleRulePolicy>(d));
    if (!allowed)
      throw DerivationError({Issue{std::string(derive_error::kDirectiveNotAllowed), directive_index(d),
                                   std::string(directive_kind(d)) + " cannot be applied to a layer-" +
                                       std::to_string(parent.layer) + " catalogue"}});
  }
  if (auto unknown = check_directive_indices(parent, batch); !unknown.empty()) throw DerivationError(std::move(unknown));

  const std::string child_id = record.child.value_or(id + "-l" + std::to_string(parent.layer + 1));
  const bool derive_now = parent.layer == 1 || finalize || record.child.has_value();

  // Everything below is computed before any state changes so that a failure leaves the store untouched.
  std::optional<Catalogue> child;
  std::optional<Catalogue> grandchild;
  auto existing_child = catalogues_.find(child_id);
  if (derive_now) {
    if (existing_child != catalogues_.end() && existing_child->second.parent != id)
      return error_response(409, "already-exists", "catalogue '" + child_id + "' exists and is not derived from '" + id + "'");
    DerivationLabels labels;
    labels.id = child_id;
    child = derive(parent, DerivationScript{parent.layer + 1, candidate}, labels);
    child->version = existing_child != catalogues_.end() ? existing_child->second.catalogue->version + 1 : 1;
    if (existing_child != catalogues_.end() && existing_child->second.child) {
      const auto& child_record = existing_child->second;
      auto gc = catalogues_.find(*child_record.child);
      DerivationLabels gl;
      gl.id = *child_record.child;
      grandchild = derive(*child, DerivationScript{child->layer + 1, child_record.pending}, gl);
      grandchild->version = gc->second.catalogue->version + 1;
    }
  }

  Catalogue updated_parent = parent;
  updated_parent.version = parent.version + 1;
  record.catalogue = std::make_shared<const Catalogue>(std::move(updated_parent));
  record.pending = std::move(candidate);
  json child_json = nullptr;
  if (child) {
    record.child = child_id;
    auto& child_record = catalogues_[child_id];
    child_record.parent = id;
    child_record.catalogue = std::make_shared<const Catalogue>(std::move(*child));
    child_json = catalogue_summary(*child_record.catalogue);
    child_json["stats"] = stats_or_null(*child_record.catalogue);
    snapshot_catalogue(child_id);
    if (grandchild) {
      auto& gc_record = catalogues_[*child_record.child];
      gc_record.catalogue = std::make_shared<const Catalogue>(std::move(*grandchild));
      snapshot_catalogue(*child_record.child);
    }
  }
  snapshot_catalogue(id);

  const auto version = record.catalogue->version;
  json response{{"id", id},
                {"version", version},
                {"pending_directives", record.pending.size()},
                {"child", std::move(child_json)}};
  return with_etag(json_response(200, response), version);
}

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

ApiResponse Workbench::list_solutions() const {
  std::shared_lock lock(mutex_);
  json arr = json::array();
  for (const auto& [name, record] : solutions_)
    arr.push_back(json{{"name", name}, {"vendor", record.profile->vendor}, {"version", record.version}});
  return json_response(200, json{{"solutions", std::move(arr)}});
}

ApiResponse Workbench::get_solution(const std::string& name) const {
  std::shared_lock lock(mutex_);
  auto it = solutions_.find(name);
  if (it == solutions_.end()) return error_response(404, "not-found", "no solution '" + name + "'");
  return with_etag(json_response(200, to_json(*it->second.profile)), it->second.version);
}

ApiResponse Workbench::put_solution(const ApiRequest& request, bool create_only, const std::string& path_name) {
  SolutionProfile profile = profile_from_json(parse_json(request.body));
  if (profile.name.empty()) return error_response(400, store_error::kMalformed, "solution name is empty");
  if (!path_name.empty() && path_name != profile.name)
    return error_response(400, store_error::kMalformed, "path names '" + path_name + "' but body names '" + profile.name + "'");

  std::optional<std::uint64_t> cited;
  if (auto it = request.headers.find("if-match"); it != request.headers.end()) {
    cited = parse_version(it->second);
    if (!cited) return error_response(400, store_error::kMalformed, "If-Match is not a version");
  }

  std::unique_lock lock(mutex_);
  auto it = solutions_.find(profile.name);
  if (it != solutions_.end() && create_only)
    return error_response(409, "already-exists", "solution '" + profile.name + "' already exists");
  if (cited) {
    const std::uint64_t current = it == solutions_.end() ? 0 : it->second.version;
    if (*cited != current)
      return error_response(409, "stale-version", "solution '" + profile.name + "' is at version " +
                                                      std::to_string(current) + ", request cited " +
                                                      std::to_string(*cited));
  }
  const bool created = it == solutions_.end();
  const std::uint64_t version = created ? 1 : it->second.version + 1;
  const auto name = profile.name;
  solutions_[name] = SolutionRecord{std::make_shared<const SolutionProfile>(std::move(profile)), version};
  snapshot_solution(name);
  return with_etag(json_response(created ? 201 : 200, json{{"name", name}, {"version", version}}), version);
}

// ---------------------------------------------------------------------------
// Scoring
// ---------------------------------------------------------------------------

ApiResponse Workbench::get_comparison(const ApiRequest& request) const {
  auto cat_it = request.query.find("catalogue");
  if (cat_it == request.query.end()) return error_response(400, "missing-parameter", "query needs 'catalogue'");
  const auto pinned = pinned_version(request);

  std::shared_ptr<const Catalogue> catalogue;
  std::vector<SolutionProfile> profiles;
  {
    std::shared_lock lock(mutex_);
    auto it = catalogues_.find(cat_it->second);
    if (it == catalogues_.end()) return error_response(404, "not-found", "no catalogue '" + cat_it->second + "'");
    catalogue = it->second.catalogue;
    std::vector<std::string> names;
    if (auto s = request.query.find("solutions"); s != request.query.end()) {
      names = split_list(s->second);
    } else {
      for (const auto& [name, record] : solutions_) names.push_back(name);
    }
    for (const auto& name : names) {
      auto sit = solutions_.find(name);
      if (sit == solutions_.end()) return error_response(404, "not-found", "no solution '" + name + "'");
      profiles.push_back(*sit->second.profile);
    }
  }
  if (pinned && *pinned != catalogue->version)
    return with_etag(error_response(409, "stale-version",
                                    "catalogue changed: now at version " + std::to_string(catalogue->version)),
                     catalogue->version);
  const auto report = compare(*catalogue, profiles);
  auto response = with_etag(ApiResponse{200, save_report(report, ReportFormat::Structured), {}}, catalogue->version);
  response.headers["Content-Type"] = "application/json";
  return response;
}

ApiResponse Workbench::post_whatif(const ApiRequest& request) const {
  const json body = parse_json(request.body);
  if (!body.is_object() || !body.contains("catalogue") || !body.at("catalogue").is_string())
    return error_response(400, store_error::kMalformed, "body needs a 'catalogue' id");
  std::vector<Perturbation> perturbations;
  if (body.contains("perturbations")) {
    const auto& arr = body.at("perturbations");
    if (!arr.is_array()) return error_response(400, store_error::kMalformed, "perturbations must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      perturbations.push_back(perturbation_from_json(arr[i], "/perturbations/" + std::to_string(i)));
  }
  std::optional<std::uint64_t> pinned;
  if (body.contains("version") && !body.at("version").is_null()) {
    if (!body.at("version").is_number_unsigned()) return error_response(400, store_error::kMalformed, "version must be an integer");
    pinned = body.at("version").get<std::uint64_t>();
  }

  const auto id = body.at("catalogue").get<std::string>();
  std::shared_ptr<const Catalogue> catalogue;
  std::vector<SolutionProfile> profiles;
  {
    std::shared_lock lock(mutex_);
    auto it = catalogues_.find(id);
    if (it == catalogues_.end()) return error_response(404, "not-found", "no catalogue '" + id + "'");
    catalogue = it->second.catalogue;
    std::vector<std::string> names;
    if (body.contains("solutions")) {
      const auto& arr = body.at("solutions");
      if (!arr.is_array()) return error_response(400, store_error::kMalformed, "solutions must be an array of names");
      for (const auto& n : arr) {
        if (!n.is_string()) return error_response(400, store_error::kMalformed, "solutions must be an array of names");
        names.push_back(n.get<std::string>());
      }
    } else {
      for (const auto& [name, record] : solutions_) names.push_back(name);
    }
    for (const auto& name : names) {
      auto sit = solutions_.find(name);
      if (sit == solutions_.end()) return error_response(404, "not-found", "no solution '" + name + "'");
      profiles.push_back(*sit->second.profile);
    }
  }
  if (pinned && *pinned != catalogue->version)
    return error_response(409, "stale-version", "catalogue changed: now at version " + std::to_string(catalogue->version));
  const auto result = whatif(*catalogue, profiles, perturbations);
  return ApiResponse{200, save_whatif(result, ReportFormat::Structured), {{"Content-Type", "application/json"}}};
}

// ---------------------------------------------------------------------------
// Snapshots
// ---------------------------------------------------------------------------

void Workbench::snapshot_catalogue(const std::string& id) const {
  if (!options_.snapshot_dir) return;
  const auto& record = catalogues_.at(id);
  const auto dir = *options_.snapshot_dir / "catalogues";
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / (file_safe(id) + ".json"), serialize_catalogue(*record.catalogue));
  if (!record.pending.empty())
    write_file_atomic(dir / (file_safe(id) + ".pending.json"),
                      serialize_script(DerivationScript{record.catalogue->layer + 1, record.pending}));
}

void Workbench::snapshot_solution(const std::string& name) const {
  if (!options_.snapshot_dir) return;
  const auto dir = *options_.snapshot_dir / "solutions";
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / (file_safe(name) + ".json"), serialize_profile(*solutions_.at(name).profile));
}

// ---------------------------------------------------------------------------
// HTTP binding
// ---------------------------------------------------------------------------

WorkbenchServer::WorkbenchServer(Workbench& workbench, Options options)
    : workbench_(workbench), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    request.body = req.body;
    for (const auto& [key, value] : req.params) request.query[key] = value;
    for (const auto& [key, value] : req.headers) {
      std::string lower = key;
      std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
      request.headers[lower] = value;
    }
    const auto response = workbench_.handle(request);
    res.status = response.status;
    for (const auto& [key, value] : response.headers)
      if (key != "Content-Type") res.set_header(key, value);
    auto type = response.headers.find("Content-Type");
    res.set_content(response.body, type == response.headers.end() ? "application/json" : type->second.c_str());
  };
  server_->Get(".*", dispatch);
  server_->Post(".*", dispatch);
  server_->Put(".*", dispatch);
  server_->Options(".*", dispatch);
  const std::string origin = options_.cors_origin;
  server_->set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, If-Match");
    res.set_header("Access-Control-Expose-Headers", "ETag, Location");
  });
}

WorkbenchServer::~WorkbenchServer() { stop(); }

bool WorkbenchServer::listen() { return server_->listen(options_.bind, options_.port); }

int WorkbenchServer::bind_to_any_port() { return server_->bind_to_any_port(options_.bind); }

bool WorkbenchServer::listen_after_bind() { return server_->listen_after_bind(); }

void WorkbenchServer::stop() {
  if (server_) server_->stop();
}

void WorkbenchServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace critcat
