#include <catch_amalgamated.hpp>

#include "critcat/catalogue_store.hpp"
#include "critcat/layer_engine.hpp"
#include "test_support.hpp"

using namespace critcat;
using namespace critcat::testing;

TEST_CASE("fixtures survive a serialize/load round trip byte for byte") {
  const auto& fx = load_fixtures();
  for (const auto* cat : {&fx.general_catalogue, &fx.maas_expected_layer3}) {
    const auto bytes = serialize_catalogue(*cat);
    const auto back = load_catalogue(bytes);
    CHECK(back == *cat);
    CHECK(serialize_catalogue(back) == bytes);
  }
  for (const auto* script : {&fx.maas_refinement, &fx.maas_weighting}) {
    const auto bytes = serialize_script(*script);
    CHECK(load_script(bytes) == *script);
    CHECK(serialize_script(load_script(bytes)) == bytes);
  }
}

TEST_CASE("documents carry the format version and reject others") {
  auto j = to_json(three_criterion_catalogue());
  CHECK(j.at("format_version") == kFormatVersion);
  j["format_version"] = 2;
  try {
    load_catalogue(dump_canonical(j));
    FAIL("expected StoreError");
  } catch (const StoreError& e) {
    CHECK(e.code() == store_error::kUnsupportedVersion);
  }
}

TEST_CASE("unknown and missing keys are malformed, with a path") {
  auto j = to_json(three_criterion_catalogue());
  j["criteria"][1]["colour"] = "blue";
  try {
    load_catalogue(dump_canonical(j));
    FAIL("expected StoreError");
  } catch (const StoreError& e) {
    CHECK(e.code() == store_error::kMalformed);
    CHECK(std::string(e.what()).find("/criteria/1") != std::string::npos);
  }
  j = to_json(three_criterion_catalogue());
  j["criteria"][0].erase("weight");
  CHECK_THROWS_AS(load_catalogue(dump_canonical(j)), StoreError);
}

TEST_CASE("syntax errors report line and column") {
  try {
    load_catalogue("{\n  \"id\": \"x\",\n  oops\n}\n");
    FAIL("expected StoreError");
  } catch (const StoreError& e) {
    CHECK(e.code() == store_error::kMalformed);
    CHECK(e.line == std::optional<std::size_t>(3));
    CHECK(e.column.value_or(0) > 0);
  }
}

TEST_CASE("invalid catalogues fail to load with their report") {
  auto cat = three_criterion_catalogue();
  cat.criteria[0].weight = 0.9;
  try {
    load_catalogue(serialize_catalogue(cat));
    FAIL("expected StoreError");
  } catch (const StoreError& e) {
    CHECK(e.code() == store_error::kValidationFailure);
    CHECK(e.report.has(rule::kWeightsSum));
  }
}

TEST_CASE("profiles and answers round trip") {
  const auto p = two_solution_cohort()[0];
  CHECK(load_profile(serialize_profile(p)) == p);
  const auto bad = std::string(R"({"format_version":1,"name":"x","vendor":"","notes":"",)"
                               R"("answers":{"1.1":{"kind":"likert","value":3,"extra":1}}})");
  CHECK_THROWS_AS(load_profile(bad), StoreError);
}

TEST_CASE("structured reports round trip") {
  const auto report = compare(three_criterion_catalogue(), two_solution_cohort());
  const auto bytes = save_report(report, ReportFormat::Structured);
  CHECK(load_report(bytes) == report);
  CHECK(save_report(load_report(bytes), ReportFormat::Structured) == bytes);
}

TEST_CASE("table and markdown reports are human readable") {
  auto cohort = two_solution_cohort();
  cohort.push_back(profile("SolutionC", 0, 5, 150));
  const auto report = compare(three_criterion_catalogue(), cohort);
  const auto table = save_report(report, ReportFormat::Table, DecimalMark::Comma);
  CHECK(table.find("SolutionA") < table.find("SolutionC"));
  CHECK(table.find("2.2") != std::string::npos);
  CHECK(table.find("disqualified") != std::string::npos);
  CHECK(table.find("84,6%") != std::string::npos);  // 2.2 / 2.6

  const auto md = save_report(report, ReportFormat::Markdown, DecimalMark::Period);
  CHECK(md.find("| 1 |") != std::string::npos);
  CHECK(md.find("84.6%") != std::string::npos);
}

TEST_CASE("score formatting trims trailing zeros") {
  CHECK(format_score(2.2) == "2.2");
  CHECK(format_score(1.0) == "1");
  CHECK(format_score(0.123456) == "0.1235");
}

TEST_CASE("atomic writes replace the target") {
  const auto dir = scratch_dir("store");
  const auto path = dir / "doc.json";
  write_file_atomic(path, "one");
  write_file_atomic(path, "two");
  CHECK(read_file(path) == "two");
  CHECK_FALSE(std::filesystem::exists(dir / "doc.json.tmp"));
  CHECK_THROWS_AS(read_file(dir / "missing.json"), StoreError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("random valid catalogues round trip") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto rc = random_case(rng);
    const auto bytes = serialize_catalogue(rc.catalogue);
    CHECK(load_catalogue(bytes) == rc.catalogue);
    for (const auto& p : rc.cohort) CHECK(load_profile(serialize_profile(p)) == p);
  }
}
