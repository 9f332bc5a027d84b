#pragma once

// Shared builders for the hand-computed scoring example and the random
// catalogue generator, plus a reference evaluator that does not touch the
// scoring engine.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "critcat/catalogue_model.hpp"
#include "critcat/scoring_engine.hpp"

namespace critcat::testing {

inline CriterionIndex ix(int major, int minor) { return CriterionIndex{major, minor}; }

inline Criterion layer3_criterion(CriterionIndex index, std::string category, int rating, bool showstopper,
                                  ScaleSpec scale, double weight) {
  Criterion c;
  c.index = index;
  c.category = std::move(category);
  c.question = "Question " + index.str() + "?";
  c.original_question = c.question;
  if (const auto* n = std::get_if<NumericScale>(&scale)) c.answer_kind = NumericQuantity{n->unit, n->polarity};
  if (const auto* i = std::get_if<IntervalScale>(&scale)) c.answer_kind = NumericQuantity{i->unit, Polarity::Benefit};
  c.rating = rating;
  c.showstopper = showstopper;
  c.scale = std::move(scale);
  c.weight = weight;
  return c;
}

// {Boolean showstopper w=0.4; Likert w=0.4; Numeric cost in EUR w=0.2}
inline Catalogue three_criterion_catalogue() {
  Catalogue cat;
  cat.id = "three";
  cat.layer = 3;
  cat.title = "Three criteria";
  cat.domain_label = "test";
  cat.context_label = "test";
  cat.criteria.push_back(layer3_criterion(ix(1, 1), "Security", 4, true, BooleanScale{}, 0.4));
  cat.criteria.push_back(layer3_criterion(ix(2, 1), "Usability", 4, false, LikertScale{}, 0.4));
  cat.criteria.push_back(layer3_criterion(ix(3, 1), "Costs", 2, false, NumericScale{"EUR", Polarity::Cost}, 0.2));
  return cat;
}

inline SolutionProfile profile(std::string name, int boolean, int likert, double eur) {
  SolutionProfile p;
  p.name = std::move(name);
  p.vendor = p.name + " Inc.";
  p.answers[ix(1, 1)] = BooleanAnswer{boolean};
  p.answers[ix(2, 1)] = LikertAnswer{likert};
  p.answers[ix(3, 1)] = NumericAnswer{eur, "EUR"};
  return p;
}

inline std::vector<SolutionProfile> two_solution_cohort() {
  return {profile("SolutionA", 1, 4, 100.0), profile("SolutionB", 1, 2, 200.0)};
}

// ---------------------------------------------------------------------------
// Random catalogues for property checks
// ---------------------------------------------------------------------------

struct RandomCase {
  Catalogue catalogue;
  std::vector<SolutionProfile> cohort;
};

inline IntervalScale random_intervals(std::mt19937_64& rng) {
  // 2..4 contiguous bins over [0, 100], half of them listed descending.
  std::uniform_int_distribution<int> count(2, 4);
  const int n = count(rng);
  std::vector<double> edges{0.0, 100.0};
  std::uniform_real_distribution<double> cut(1.0, 99.0);
  while (static_cast<int>(edges.size()) < n + 1) {
    double e = std::round(cut(rng));
    if (std::find(edges.begin(), edges.end(), e) == edges.end()) edges.push_back(e);
  }
  std::sort(edges.begin(), edges.end());
  IntervalScale s;
  s.unit = "u";
  for (int i = 0; i < n; ++i) s.bins.push_back({"b" + std::to_string(i), edges[i], edges[i + 1]});
  if (rng() % 2) std::reverse(s.bins.begin(), s.bins.end());
  return s;
}

inline RandomCase random_case(std::mt19937_64& rng, std::size_t max_criteria = 6, std::size_t max_solutions = 4) {
  std::uniform_int_distribution<std::size_t> n_crit(1, max_criteria);
  std::uniform_int_distribution<std::size_t> n_sol(1, max_solutions);
  std::uniform_int_distribution<int> rating(1, 5);
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<int> likert(1, 5);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> raw(0.0, 100.0);
  const char* categories[] = {"Usability", "Costs", "Performance"};

  RandomCase rc;
  auto& cat = rc.catalogue;
  cat.id = "random";
  cat.layer = 3;
  cat.title = "random";
  cat.domain_label = "d";
  cat.context_label = "c";
  const std::size_t n = n_crit(rng);
  int total = 0;
  std::vector<int> ratings;
  for (std::size_t i = 0; i < n; ++i) total += ratings.emplace_back(rating(rng));
  for (std::size_t i = 0; i < n; ++i) {
    const bool showstopper = rng() % 5 == 0;
    ScaleSpec scale = BooleanScale{};
    if (!showstopper) {
      switch (kind(rng)) {
        case 0: scale = BooleanScale{}; break;
        case 1: scale = LikertScale{}; break;
        case 2: scale = NumericScale{"u", coin(rng) ? Polarity::Benefit : Polarity::Cost}; break;
        default: scale = random_intervals(rng); break;
      }
    }
    cat.criteria.push_back(layer3_criterion(ix(static_cast<int>(i) + 1, 1), categories[i % 3], ratings[i],
                                            showstopper, scale, static_cast<double>(ratings[i]) / total));
  }

  const std::size_t m = n_sol(rng);
  for (std::size_t s = 0; s < m; ++s) {
    SolutionProfile p;
    p.name = "S" + std::to_string(s);
    for (const auto& c : cat.criteria) {
      if (std::holds_alternative<BooleanScale>(*c.scale)) p.answers[c.index] = BooleanAnswer{coin(rng)};
      else if (std::holds_alternative<LikertScale>(*c.scale)) p.answers[c.index] = LikertAnswer{likert(rng)};
      // integral raws make cohort ties likely, which exercises the zero-span rule
      else p.answers[c.index] = NumericAnswer{std::round(raw(rng) / 10.0) * 10.0, "u"};
    }
    rc.cohort.push_back(std::move(p));
  }
  return rc;
}

// ---------------------------------------------------------------------------
// Reference evaluator: each term written out from the definition.
// ---------------------------------------------------------------------------

inline double reference_ms(const Catalogue& cat, const SolutionProfile& who, const std::vector<SolutionProfile>& cohort) {
  double total = 0.0;
  for (const auto& c : cat.criteria) {
    const double w = *c.weight;
    const auto& a = who.answers.at(c.index);
    double term = 0.0;
    if (std::holds_alternative<BooleanScale>(*c.scale)) {
      term = std::get<BooleanAnswer>(a).value == 1 ? 1.0 : 0.0;
    } else if (std::holds_alternative<LikertScale>(*c.scale)) {
      term = std::get<LikertAnswer>(a).value;
    } else if (const auto* ns = std::get_if<NumericScale>(&*c.scale)) {
      double lo = 1e300, hi = -1e300;
      for (const auto& member : cohort) {
        const double v = std::get<NumericAnswer>(member.answers.at(c.index)).raw;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const double x = std::get<NumericAnswer>(a).raw;
      if (hi == lo) term = 0.5;
      else if (ns->polarity == Polarity::Benefit) term = (x - lo) / (hi - lo);
      else term = (hi - x) / (hi - lo);
    } else {
      const auto& is = std::get<IntervalScale>(*c.scale);
      const double x = std::get<NumericAnswer>(a).raw;
      double top = -1e300;
      for (const auto& b : is.bins) top = std::max(top, b.upper);
      std::size_t pos = is.bins.size();
      for (std::size_t i = 0; i < is.bins.size(); ++i) {
        const auto& b = is.bins[i];
        const bool inside = x >= b.lower && (x < b.upper || (b.upper == top && x == top));
        if (inside) {
          pos = i;
          break;
        }
      }
      term = static_cast<double>(pos) / static_cast<double>(is.bins.size() - 1);
    }
    total += w * term;
  }
  return total;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("critcat-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace critcat::testing
