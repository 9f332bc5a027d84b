#include <catch_amalgamated.hpp>

#include <httplib.h>
#include <json.hpp>

#include <thread>

#include "critcat/catalogue_store.hpp"
#include "critcat/workbench_service.hpp"
#include "test_support.hpp"

using namespace critcat;
using namespace critcat::testing;
using nlohmann::json;

namespace {

ApiResponse call(Workbench& wb, std::string method, std::string path, std::string body = {},
                 std::map<std::string, std::string> headers = {}, std::map<std::string, std::string> query = {}) {
  ApiRequest r;
  r.method = std::move(method);
  r.path = std::move(path);
  r.body = std::move(body);
  r.headers = std::move(headers);
  r.query = std::move(query);
  return wb.handle(r);
}

json body_of(const ApiResponse& r) { return json::parse(r.body); }

json stats_json(int n, int k, int l, int m) {
  return json{{"n_total", n}, {"n_numeric", k}, {"n_boolean", l}, {"n_likert", m}};
}

std::string etag(std::uint64_t v) { return "\"" + std::to_string(v) + "\""; }

void seed_three(Workbench& wb) {
  REQUIRE(call(wb, "POST", "/catalogues", serialize_catalogue(three_criterion_catalogue())).status == 201);
  for (const auto& p : two_solution_cohort()) REQUIRE(call(wb, "POST", "/solutions", serialize_profile(p)).status == 201);
}

json maas_removals() {
  json arr = json::array();
  for (const auto& d : load_fixtures().maas_refinement.directives)
    if (std::holds_alternative<RemoveDirective>(d)) arr.push_back(to_json(d));
  return arr;
}

}  // namespace

TEST_CASE("catalogue creation from a fixture") {
  Workbench wb;
  auto r = call(wb, "POST", "/catalogues", R"({"fixture":"general"})");
  REQUIRE(r.status == 201);
  CHECK(body_of(r).at("criteria_count") == 62);
  CHECK(r.headers.at("ETag") == etag(1));

  CHECK(call(wb, "POST", "/catalogues", R"({"fixture":"general"})").status == 409);
  CHECK(call(wb, "GET", "/catalogues/nope").status == 404);
  CHECK(call(wb, "POST", "/catalogues", "{not json").status == 400);

  r = call(wb, "GET", "/catalogues");
  CHECK(body_of(r).at("catalogues").size() == 1);
}

TEST_CASE("catalogue creation validates before storing") {
  Workbench wb;
  auto cat = three_criterion_catalogue();
  cat.criteria[0].weight = 0.1;
  const auto r = call(wb, "POST", "/catalogues", dump_canonical(to_json(cat)));
  CHECK(r.status == 422);
  const auto j = body_of(r);
  CHECK(j.at("error") == "validation-failure");
  CHECK_FALSE(j.at("report").at("violations").empty());
  CHECK(call(wb, "GET", "/catalogues/three").status == 404);
}

TEST_CASE("get returns document, validation and stats") {
  Workbench wb;
  call(wb, "POST", "/catalogues", R"({"fixture":"maas-expected-layer3"})");
  const auto j = body_of(call(wb, "GET", "/catalogues/maas-sme-l3"));
  CHECK(j.at("stats") == stats_json(44, 5, 24, 15));
  CHECK(j.at("validation").at("violations").empty());
  CHECK(j.at("document").at("criteria").size() == 44);
}

TEST_CASE("posting the MaaS removals derives a 44-criterion child") {
  Workbench wb;
  call(wb, "POST", "/catalogues", R"({"fixture":"general"})");
  const json batch{{"directives", maas_removals()}};
  CHECK(call(wb, "POST", "/catalogues/general-software-criteria/directives", batch.dump()).status == 428);

  auto r = call(wb, "POST", "/catalogues/general-software-criteria/directives", batch.dump(), {{"if-match", etag(1)}});
  REQUIRE(r.status == 200);
  CHECK(r.headers.at("ETag") == etag(2));
  const auto child = body_of(r).at("child");
  CHECK(child.at("criteria_count") == 44);
  CHECK(child.at("layer") == 2);

  const auto id = child.at("id").get<std::string>();
  const auto got = body_of(call(wb, "GET", "/catalogues/" + id));
  CHECK(got.at("parent") == "general-software-criteria");
}

TEST_CASE("a stale version is rejected without side effects") {
  Workbench wb;
  call(wb, "POST", "/catalogues", R"({"fixture":"general"})");
  const json batch{{"directives", maas_removals()}};
  REQUIRE(call(wb, "POST", "/catalogues/general-software-criteria/directives", batch.dump(), {{"if-match", etag(1)}})
              .status == 200);
  const auto digest = wb.state_digest();
  const json second{{"directives", json::array({to_json(Directive{RemoveDirective{ix(1, 1), "x"}})})}};
  const auto r =
      call(wb, "POST", "/catalogues/general-software-criteria/directives", second.dump(), {{"if-match", etag(1)}});
  CHECK(r.status == 409);
  CHECK(wb.state_digest() == digest);
}

TEST_CASE("finalising with unrated criteria lists them all") {
  Workbench wb;
  call(wb, "POST", "/catalogues", R"({"fixture":"general"})");
  auto r = call(wb, "POST", "/catalogues/general-software-criteria/directives",
                json{{"directives", maas_removals()}}.dump(), {{"if-match", etag(1)}});
  const auto l2 = body_of(r).at("child").at("id").get<std::string>();
  const auto digest = wb.state_digest();

  const json rate{{"directives", json::array({to_json(Directive{RateDirective{ix(2, 4), 4, std::nullopt}})})},
                  {"finalize", true}};
  r = call(wb, "POST", "/catalogues/" + l2 + "/directives", rate.dump(), {{"if-match", etag(1)}});
  CHECK(r.status == 422);
  const auto issues = body_of(r).at("issues");
  CHECK(issues.size() == 43);
  for (const auto& i : issues) {
    CHECK(i.at("code") == "missing-rating");
    CHECK(i.at("index") != "2.4");
  }
  CHECK(wb.state_digest() == digest);
}

TEST_CASE("the full MaaS weighting through the API matches the derived catalogue") {
  Workbench wb;
  call(wb, "POST", "/catalogues", R"({"fixture":"general"})");
  auto r = call(wb, "POST", "/catalogues/general-software-criteria/directives",
                json{{"directives", to_json(load_fixtures().maas_refinement).at("directives")}}.dump(),
                {{"if-match", etag(1)}});
  const auto l2 = body_of(r).at("child").at("id").get<std::string>();
  r = call(wb, "POST", "/catalogues/" + l2 + "/directives",
           json{{"directives", to_json(load_fixtures().maas_weighting).at("directives")}, {"finalize", true}}.dump(),
           {{"if-match", etag(1)}});
  REQUIRE(r.status == 200);
  CHECK(body_of(r).at("child").at("stats") == stats_json(44, 5, 25, 14));

  // a second rating for 23.1 is a duplicate; the failed batch leaves the child untouched
  const auto l3 = body_of(r).at("child").at("id").get<std::string>();
  r = call(wb, "POST", "/catalogues/" + l2 + "/directives",
           json{{"directives", json::array({to_json(Directive{RateDirective{ix(23, 1), 5, std::nullopt}})})}}.dump(),
           {{"if-match", etag(2)}});
  CHECK(r.status == 422);
  CHECK(body_of(call(wb, "GET", "/catalogues/" + l3)).at("version") == 1);
}

TEST_CASE("comparison body equals the structured report exactly") {
  Workbench wb;
  seed_three(wb);
  const auto r = call(wb, "GET", "/comparisons", {}, {}, {{"catalogue", "three"}, {"solutions", "SolutionB,SolutionA"}});
  REQUIRE(r.status == 200);
  const auto cohort = std::vector<SolutionProfile>{two_solution_cohort()[1], two_solution_cohort()[0]};
  CHECK(r.body == save_report(compare(three_criterion_catalogue(), cohort), ReportFormat::Structured));
  const auto j = body_of(r);
  CHECK(j.at("cohort")[0].at("ms").get<double>() == Catch::Approx(2.2));
  CHECK(j.at("cohort")[1].at("ms").get<double>() == Catch::Approx(1.2));

  CHECK(call(wb, "GET", "/comparisons", {}, {}, {{"catalogue", "three"}, {"version", "7"}}).status == 409);
  CHECK(call(wb, "GET", "/comparisons", {}, {}, {{"catalogue", "nope"}}).status == 404);
}

TEST_CASE("comparison on a layer-1 catalogue is a wrong-layer error") {
  Workbench wb;
  call(wb, "POST", "/catalogues", R"({"fixture":"general"})");
  call(wb, "POST", "/solutions", serialize_profile(two_solution_cohort()[0]));
  const auto r = call(wb, "GET", "/comparisons", {}, {}, {{"catalogue", "general-software-criteria"}});
  CHECK(r.status == 422);
  CHECK(body_of(r).at("error") == "wrong-layer");
}

TEST_CASE("incomplete profiles list their missing indices") {
  Workbench wb;
  seed_three(wb);
  auto p = two_solution_cohort()[1];
  p.answers.erase(ix(3, 1));
  REQUIRE(call(wb, "PUT", "/solutions/SolutionB", serialize_profile(p)).status == 200);
  const auto r = call(wb, "GET", "/comparisons", {}, {}, {{"catalogue", "three"}});
  CHECK(r.status == 422);
  CHECK(body_of(r).at("issues")[0].at("index") == "3.1");
}

TEST_CASE("solution upserts honour If-Match") {
  Workbench wb;
  const auto body = serialize_profile(two_solution_cohort()[0]);
  CHECK(call(wb, "PUT", "/solutions", body).status == 201);
  CHECK(call(wb, "PUT", "/solutions", body, {{"if-match", etag(1)}}).status == 200);
  CHECK(call(wb, "PUT", "/solutions", body, {{"if-match", etag(1)}}).status == 409);
  CHECK(call(wb, "POST", "/solutions", body).status == 409);
  CHECK(call(wb, "GET", "/solutions/SolutionA").headers.at("ETag") == etag(2));
  CHECK(call(wb, "GET", "/solutions/nobody").status == 404);
}

TEST_CASE("what-if is side-effect free") {
  Workbench wb;
  seed_three(wb);
  const auto digest = wb.state_digest();
  auto r = call(wb, "POST", "/whatif", R"({"catalogue":"three"})");
  REQUIRE(r.status == 200);
  auto j = body_of(r);
  CHECK(j.at("before") == j.at("after"));
  CHECK(j.at("rank_changes").empty());

  const json swap{{"catalogue", "three"},
                  {"perturbations",
                   json::array({to_json(Perturbation{OverrideAnswer{"SolutionB", ix(2, 1), LikertAnswer{5}}})})}};
  r = call(wb, "POST", "/whatif", swap.dump());
  REQUIRE(r.status == 200);
  CHECK(body_of(r).at("rank_changes").size() == 2);
  CHECK(wb.state_digest() == digest);

  const json removed{{"catalogue", "three"},
                     {"perturbations", json::array({to_json(Perturbation{SetRating{ix(9, 9), 2}})})}};
  CHECK(call(wb, "POST", "/whatif", removed.dump()).status == 422);
  CHECK(wb.state_digest() == digest);
}

TEST_CASE("changes are written through to snapshot documents") {
  const auto dir = scratch_dir("service");
  {
    Workbench wb({dir});
    seed_three(wb);
  }
  CHECK(load_catalogue(read_file(dir / "catalogues" / "three.json")) == three_criterion_catalogue());
  CHECK(load_profile(read_file(dir / "solutions" / "SolutionA.json")) == two_solution_cohort()[0]);
  std::filesystem::remove_all(dir);
}

TEST_CASE("concurrent edits citing the same version: exactly one wins") {
  Workbench wb;
  call(wb, "POST", "/catalogues", R"({"fixture":"general"})");
  std::vector<int> statuses(8);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      const json batch{{"directives", json::array({to_json(Directive{RemoveDirective{ix(2, 9 + t), "x"}})})}};
      statuses[t] = call(wb, "POST", "/catalogues/general-software-criteria/directives", batch.dump(),
                         {{"if-match", etag(1)}})
                        .status;
    });
  }
  for (auto& th : threads) th.join();
  CHECK(std::count(statuses.begin(), statuses.end(), 200) == 1);
  CHECK(std::count(statuses.begin(), statuses.end(), 409) == 7);
  const auto j = body_of(call(wb, "GET", "/catalogues/general-software-criteria-l2"));
  CHECK(j.at("document").at("criteria").size() == 61);
}

TEST_CASE("HTTP binding serves the API with CORS headers") {
  Workbench wb;
  WorkbenchServer server(wb, {"127.0.0.1", 0, "http://localhost:5173"});
  const int port = server.bind_to_any_port();
  REQUIRE(port > 0);
  std::thread loop([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto res = client.Post("/catalogues", R"({"fixture":"general"})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 201);
  CHECK(res->get_header_value("ETag") == etag(1));
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");

  res = client.Get("/catalogues/general-software-criteria");
  REQUIRE(res);
  CHECK(json::parse(res->body).at("document").at("criteria").size() == 62);

  res = client.Options("/catalogues");
  REQUIRE(res);
  CHECK(res->status == 204);

  server.stop();
  loop.join();
}
