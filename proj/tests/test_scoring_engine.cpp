#include <catch_amalgamated.hpp>

#include "critcat/scoring_engine.hpp"
#include "test_support.hpp"

using namespace critcat;
using namespace critcat::testing;

TEST_CASE("numeric answers are min-max normalised within the cohort") {
  std::vector<double> cohort{100, 200};
  CHECK(normalize_numeric(100, cohort, Polarity::Cost) == 1.0);
  CHECK(normalize_numeric(200, cohort, Polarity::Cost) == 0.0);
  CHECK(normalize_numeric(150, std::vector<double>{100, 150, 200}, Polarity::Benefit) == 0.5);
  CHECK(normalize_numeric(7, std::vector<double>{7, 7}, Polarity::Benefit) == 0.5);
  CHECK_THROWS_AS(normalize_numeric(300, cohort, Polarity::Cost), ScoringError);
  CHECK_THROWS_AS(normalize_numeric(1, std::vector<double>{}, Polarity::Cost), ScoringError);
}

TEST_CASE("interval answers score by bin position") {
  IntervalScale s{"minutes", {{"slow", 20, 30}, {"mid", 10, 20}, {"fast", 0, 10}}, false};
  CHECK(interval_score(25, s) == 0.0);
  CHECK(interval_score(15, s) == 0.5);
  CHECK(interval_score(0, s) == 1.0);
  CHECK(interval_score(30, s) == 0.0);
  CHECK_THROWS_AS(interval_score(31, s), ScoringError);
}

TEST_CASE("single contributions") {
  const auto cat = three_criterion_catalogue();
  CHECK(answer_contribution(NumericAnswer{100, "EUR"}, cat.criteria[2], {{100, 200}}) == Catch::Approx(0.2));
  CHECK(answer_contribution(LikertAnswer{5}, cat.criteria[1]) == Catch::Approx(2.0));
  CHECK(answer_contribution(BooleanAnswer{0}, cat.criteria[0]) == 0.0);
  CHECK_THROWS_AS(answer_contribution(LikertAnswer{6}, cat.criteria[1]), ScoringError);
  CHECK_THROWS_AS(answer_contribution(BooleanAnswer{2}, cat.criteria[0]), ScoringError);
  CHECK_THROWS_AS(answer_contribution(LikertAnswer{3}, cat.criteria[0]), ScoringError);
  CHECK_THROWS_AS(answer_contribution(NumericAnswer{100, "USD"}, cat.criteria[2], {{100, 200}}), ScoringError);
}

TEST_CASE("hand-computed three-criterion example") {
  const auto cat = three_criterion_catalogue();
  const auto cohort = two_solution_cohort();
  const auto a = matching_score(cat, cohort[0], cohort);
  CHECK(a.ms == Catch::Approx(2.2).margin(1e-12));
  CHECK(a.ms_max == Catch::Approx(2.6).margin(1e-12));
  CHECK(a.ms_fraction == Catch::Approx(2.2 / 2.6));
  CHECK(a.failed_showstoppers.empty());
  REQUIRE(a.per_criterion.size() == 3);
  CHECK(a.per_criterion[1].contribution == Catch::Approx(1.6));
  CHECK(a.per_category.at("Costs") == Catch::Approx(0.2));

  const auto b = matching_score(cat, cohort[1], cohort);
  CHECK(b.ms == Catch::Approx(1.2).margin(1e-12));
}

TEST_CASE("compare ranks descending and flags disqualifications") {
  const auto cat = three_criterion_catalogue();
  auto cohort = two_solution_cohort();
  cohort.push_back(profile("SolutionC", 0, 5, 150));
  const auto report = compare(cat, cohort);
  REQUIRE(report.cohort.size() == 3);
  CHECK(report.catalogue_id == "three");
  CHECK(report.cohort[0].result.solution == "SolutionA");
  CHECK(report.cohort[0].position == 1);
  CHECK(report.cohort[0].result.ms == Catch::Approx(2.2));
  // C: 0 + 0.4*5 + 0.2*0.5 = 2.1
  CHECK(report.cohort[1].result.solution == "SolutionC");
  CHECK(report.cohort[1].result.ms == Catch::Approx(2.1));
  CHECK(report.cohort[1].result.failed_showstoppers == std::vector<CriterionIndex>{ix(1, 1)});
  CHECK(report.cohort[2].result.ms == Catch::Approx(1.2));
  REQUIRE(report.disqualified.size() == 1);
  CHECK(report.disqualified[0].solution == "SolutionC");
  CHECK(report.disqualified[0].failed_showstoppers == std::vector<CriterionIndex>{ix(1, 1)});
}

TEST_CASE("ties keep input order and are flagged") {
  const auto cat = three_criterion_catalogue();
  std::vector<SolutionProfile> cohort{profile("Z", 1, 3, 100), profile("A", 1, 3, 100), profile("M", 1, 1, 100)};
  const auto report = compare(cat, cohort);
  CHECK(report.cohort[0].result.solution == "Z");
  CHECK(report.cohort[1].result.solution == "A");
  CHECK(report.cohort[0].tie);
  CHECK(report.cohort[1].tie);
  CHECK_FALSE(report.cohort[2].tie);
}

TEST_CASE("missing answers are listed per profile") {
  const auto cat = three_criterion_catalogue();
  auto cohort = two_solution_cohort();
  cohort[1].answers.erase(ix(2, 1));
  try {
    compare(cat, cohort);
    FAIL("expected ScoringError");
  } catch (const ScoringError& e) {
    CHECK(e.code() == score_error::kMissingAnswer);
    CHECK(std::string(e.what()).find("2.1") != std::string::npos);
    CHECK(std::string(e.what()).find("SolutionB") != std::string::npos);
    REQUIRE(e.issues().size() == 1);
    CHECK(e.issues()[0].index == ix(2, 1));
  }
}

TEST_CASE("compare rejects non-final catalogues and duplicate names") {
  auto cat = three_criterion_catalogue();
  auto cohort = two_solution_cohort();
  cohort[1].name = cohort[0].name;
  CHECK_THROWS_AS(compare(cat, cohort), ScoringError);
  cat.layer = 2;
  CHECK_THROWS_AS(compare(cat, two_solution_cohort()), Error);
  CHECK_THROWS_AS(compare(three_criterion_catalogue(), std::vector<SolutionProfile>{}), ScoringError);
}

TEST_CASE("what-if with no perturbations changes nothing") {
  const auto r = whatif(three_criterion_catalogue(), two_solution_cohort(), {});
  CHECK(r.before == r.after);
  CHECK(r.rank_changes.empty());
}

TEST_CASE("what-if override of a Likert answer swaps the ranking") {
  std::vector<Perturbation> p{OverrideAnswer{"SolutionB", ix(2, 1), LikertAnswer{5}}};
  const auto r = whatif(three_criterion_catalogue(), two_solution_cohort(), p);
  CHECK(r.after.cohort[0].result.solution == "SolutionB");
  CHECK(r.after.cohort[0].result.ms == Catch::Approx(2.4));
  CHECK(r.after.cohort[1].result.ms == Catch::Approx(2.2));
  REQUIRE(r.rank_changes.size() == 2);
  CHECK(r.rank_changes[0] == RankChange{"SolutionA", 1, 2});
  CHECK(r.rank_changes[1] == RankChange{"SolutionB", 2, 1});
}

TEST_CASE("what-if rating change renormalises all weights") {
  const auto cat = three_criterion_catalogue();
  std::vector<Perturbation> p{SetRating{ix(3, 1), 2 + 8}};
  CHECK_THROWS_AS(apply_catalogue_perturbations(cat, p), ScoringError);

  p = {SetRating{ix(3, 1), 5}};  // ratings 4,4,5 -> sum 13
  const auto changed = apply_catalogue_perturbations(cat, p);
  CHECK(*changed.criteria[0].weight == Catch::Approx(4.0 / 13));
  CHECK(*changed.criteria[2].weight == Catch::Approx(5.0 / 13));
  CHECK(std::holds_alternative<NumericScale>(*changed.criteria[2].scale));
}

TEST_CASE("what-if showstopper toggle re-derives the scale") {
  const auto cat = three_criterion_catalogue();
  std::vector<Perturbation> p{ToggleShowstopper{ix(1, 1)}};
  const auto off = apply_catalogue_perturbations(cat, p);
  CHECK(off.criteria[0].showstopper == false);
  // rating 4 without the flag becomes Likert, so a 0/1 answer no longer fits
  CHECK(std::holds_alternative<LikertScale>(*off.criteria[0].scale));
  try {
    whatif(cat, two_solution_cohort(), p);
    FAIL("expected ScoringError");
  } catch (const ScoringError& e) {
    CHECK(e.code() == score_error::kBreaksValidation);
  }
  std::vector<Perturbation> fixed{ToggleShowstopper{ix(1, 1)}, OverrideAnswer{"SolutionA", ix(1, 1), LikertAnswer{3}},
                                  OverrideAnswer{"SolutionB", ix(1, 1), LikertAnswer{5}}};
  const auto r = whatif(cat, two_solution_cohort(), fixed);
  // A: 1.2 + 1.6 + 0.2 = 3.0 ; B: 2.0 + 0.8 + 0 = 2.8
  CHECK(r.after.cohort[0].result.ms == Catch::Approx(3.0));
  CHECK(r.after.cohort[1].result.ms == Catch::Approx(2.8));
  CHECK(r.after.disqualified.empty());
}

TEST_CASE("what-if rejects unknown targets") {
  const auto cat = three_criterion_catalogue();
  std::vector<Perturbation> p{SetRating{ix(9, 9), 3}};
  CHECK_THROWS_AS(whatif(cat, two_solution_cohort(), p), ScoringError);
  p = {OverrideAnswer{"Nobody", ix(2, 1), LikertAnswer{3}}};
  CHECK_THROWS_AS(whatif(cat, two_solution_cohort(), p), ScoringError);
}

TEST_CASE("engine agrees with the reference evaluator on random catalogues") {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 200; ++i) {
    const auto rc = random_case(rng);
    for (const auto& s : rc.cohort) {
      const auto got = matching_score(rc.catalogue, s, rc.cohort);
      REQUIRE(std::abs(got.ms - reference_ms(rc.catalogue, s, rc.cohort)) <= 1e-9);
    }
  }
}
