#include "critcat/scoring_engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "critcat/layer_engine.hpp"
#include "overloaded.hpp"

namespace critcat {

using detail::Overloaded;

namespace {

Issue make_issue(std::string_view code, std::optional<CriterionIndex> index, std::string message) {
  return Issue{std::string(code), index, std::move(message)};
}

bool answer_fits_scale(const AnswerValue& answer, const ScaleSpec& scale) {
  return std::visit(Overloaded{[&](const BooleanScale&) { return std::holds_alternative<BooleanAnswer>(answer); },
                               [&](const LikertScale&) { return std::holds_alternative<LikertAnswer>(answer); },
                               [&](const NumericScale&) { return std::holds_alternative<NumericAnswer>(answer); },
                               [&](const IntervalScale&) { return std::holds_alternative<NumericAnswer>(answer); }},
                    scale);
}

std::string_view answer_name(const AnswerValue& answer) {
  return std::visit(Overloaded{[](const BooleanAnswer&) { return std::string_view{"boolean"}; },
                               [](const LikertAnswer&) { return std::string_view{"likert"}; },
                               [](const NumericAnswer&) { return std::string_view{"numeric"}; }},
                    answer);
}

/// Highest attainable contribution of one criterion.
double max_contribution(const Criterion& criterion) {
  const double w = *criterion.weight;
  return std::holds_alternative<LikertScale>(*criterion.scale) ? 5.0 * w : 1.0 * w;
}

void require_scorable(const Catalogue& catalogue) {
  if (catalogue.layer != 3) throw WrongLayerError(3, catalogue.layer);
  std::vector<Issue> issues;
  for (const auto& c : catalogue.criteria) {
    if (!c.scale) issues.push_back(make_issue(rule::kMissingScale, c.index, c.index.str() + " has no scale"));
    if (!c.weight) issues.push_back(make_issue(rule::kMissingWeight, c.index, c.index.str() + " has no weight"));
  }
  if (!issues.empty())
    throw ScoringError(score_error::kInvalidCatalogue, "catalogue is not scorable", std::move(issues));
}

std::vector<Issue> missing_answers(const Catalogue& catalogue, const SolutionProfile& profile) {
  std::vector<Issue> issues;
  for (const auto& c : catalogue.criteria) {
    if (!profile.answers.count(c.index))
      issues.push_back(make_issue(score_error::kMissingAnswer, c.index,
                                  "solution '" + profile.name + "' has no answer for " + c.index.str()));
  }
  return issues;
}

std::string join_indices(const std::vector<Issue>& issues) {
  std::string text;
  for (const auto& issue : issues) {
    if (!issue.index) continue;
    if (!text.empty()) text += ", ";
    text += issue.index->str();
  }
  return text;
}

}  // namespace

ScoringError::ScoringError(std::string_view code, std::string message, std::vector<Issue> issues,
                           std::string solution)
    : Error(std::string(code), std::move(message), std::move(issues)), solution_(std::move(solution)) {}

double normalize_numeric(double raw, std::span<const double> cohort_values, Polarity polarity) {
  if (cohort_values.empty()) throw ScoringError(score_error::kEmptyCohort, "cohort has no numeric values");
  if (std::find(cohort_values.begin(), cohort_values.end(), raw) == cohort_values.end())
    throw ScoringError(score_error::kRawNotInCohort, "value " + std::to_string(raw) + " is not part of the cohort");
  const auto [lo, hi] = std::minmax_element(cohort_values.begin(), cohort_values.end());
  const double span = *hi - *lo;
  if (span == 0.0) return 0.5;
  return polarity == Polarity::Benefit ? (raw - *lo) / span : (*hi - raw) / span;
}

double interval_score(double raw, const IntervalScale& scale) {
  if (scale.bins.size() < 2)
    throw ScoringError(score_error::kInvalidCatalogue, "interval scale needs at least two bins");
  auto bin = locate_bin(scale.bins, raw);
  if (!bin) throw ScoringError(score_error::kOutOfRange, "value " + std::to_string(raw) + " lies outside every bin");
  return static_cast<double>(*bin) / static_cast<double>(scale.bins.size() - 1);
}

double answer_contribution(const AnswerValue& answer, const Criterion& criterion,
                           const CohortContext& cohort_context) {
  if (!criterion.scale || !criterion.weight)
    throw ScoringError(score_error::kInvalidCatalogue, criterion.index.str() + " has no scale or weight");
  const auto& scale = *criterion.scale;
  const double weight = *criterion.weight;
  if (!answer_fits_scale(answer, scale))
    throw ScoringError(score_error::kScaleMismatch,
                       std::string(answer_name(answer)) + " answer for " + std::string(scale_name(scale)) +
                           " criterion " + criterion.index.str(),
                       {make_issue(score_error::kScaleMismatch, criterion.index, "answer does not fit scale")});

  auto invalid = [&](const std::string& what) {
    return ScoringError(score_error::kInvalidAnswer, what + " for " + criterion.index.str(),
                        {make_issue(score_error::kInvalidAnswer, criterion.index, what)});
  };
  auto check_unit = [&](const NumericAnswer& a, const std::string& unit) {
    if (!std::isfinite(a.raw)) throw invalid("non-finite numeric answer");
    if (a.unit != unit)
      throw ScoringError(score_error::kScaleMismatch,
                         "answer unit '" + a.unit + "' does not match '" + unit + "' for " + criterion.index.str(),
                         {make_issue(score_error::kScaleMismatch, criterion.index, "unit mismatch")});
  };

  return std::visit(
      Overloaded{[&](const BooleanScale&) {
                   const int v = std::get<BooleanAnswer>(answer).value;
                   if (v != 0 && v != 1) throw invalid("boolean answer must be 0 or 1");
                   return v * weight;
                 },
                 [&](const LikertScale&) {
                   const int v = std::get<LikertAnswer>(answer).value;
                   if (v < 1 || v > 5) throw invalid("likert answer must be within 1..5");
                   return v * weight;
                 },
                 [&](const NumericScale& s) {
                   const auto& a = std::get<NumericAnswer>(answer);
                   check_unit(a, s.unit);
                   return normalize_numeric(a.raw, cohort_context.numeric_values, s.polarity) * weight;
                 },
                 [&](const IntervalScale& s) {
                   const auto& a = std::get<NumericAnswer>(answer);
                   check_unit(a, s.unit);
                   return interval_score(a.raw, s) * weight;
                 }},
      scale);
}

MatchingScoreResult matching_score(const Catalogue& catalogue, const SolutionProfile& profile,
                                   std::span<const SolutionProfile> cohort) {
  require_scorable(catalogue);
  if (std::none_of(cohort.begin(), cohort.end(),
                   [&](const SolutionProfile& p) { return p.name == profile.name; }))
    throw ScoringError(score_error::kNotInCohort, "solution '" + profile.name + "' is not part of the cohort", {},
                       profile.name);
  if (auto missing = missing_answers(catalogue, profile); !missing.empty()) {
    auto text = "solution '" + profile.name + "' is missing answers for: " + join_indices(missing);
    throw ScoringError(score_error::kMissingAnswer, text, std::move(missing), profile.name);
  }

  MatchingScoreResult result;
  result.solution = profile.name;
  for (const auto& c : catalogue.criteria) {
    const auto& answer = profile.answers.at(c.index);
    CohortContext context;
    if (std::holds_alternative<NumericScale>(*c.scale)) {
      for (const auto& member : cohort) {
        auto it = member.answers.find(c.index);
        if (it == member.answers.end()) continue;
        if (const auto* n = std::get_if<NumericAnswer>(&it->second)) context.numeric_values.push_back(n->raw);
      }
    }
    const double contribution = answer_contribution(answer, c, context);
    result.per_criterion.push_back({c.index, contribution});
    result.per_category[c.category] += contribution;
    result.ms += contribution;
    result.ms_max += max_contribution(c);
    if (c.showstopper.value_or(false)) {
      const auto* b = std::get_if<BooleanAnswer>(&answer);
      if (b && b->value == 0) result.failed_showstoppers.push_back(c.index);
    }
  }
  result.ms_fraction = result.ms_max > 0.0 ? std::clamp(result.ms / result.ms_max, 0.0, 1.0) : 0.0;
  return result;
}

ComparisonReport compare(const Catalogue& catalogue, std::span<const SolutionProfile> profiles) {
  if (catalogue.layer != 3) throw WrongLayerError(3, catalogue.layer);
  if (profiles.empty()) throw ScoringError(score_error::kNoProfiles, "at least one solution profile is required");

  if (auto report = validate_catalogue(catalogue); !report.ok()) {
    std::vector<Issue> issues;
    for (const auto& v : report.violations) issues.push_back(Issue{v.rule, v.index, v.message});
    throw ScoringError(score_error::kInvalidCatalogue, "catalogue fails validation:\n" + report.to_string(),
                       std::move(issues));
  }

  std::set<std::string> names;
  for (const auto& p : profiles) {
    if (!names.insert(p.name).second)
      throw ScoringError(score_error::kDuplicateSolution, "solution name '" + p.name + "' appears twice", {}, p.name);
  }

  std::vector<Issue> all_missing;
  std::string message;
  std::string first_incomplete;
  for (const auto& p : profiles) {
    auto missing = missing_answers(catalogue, p);
    if (missing.empty()) continue;
    if (first_incomplete.empty()) first_incomplete = p.name;
    if (!message.empty()) message += "\n";
    message += "solution '" + p.name + "' is missing answers for: " + join_indices(missing);
    all_missing.insert(all_missing.end(), missing.begin(), missing.end());
  }
  if (!all_missing.empty())
    throw ScoringError(score_error::kMissingAnswer, message, std::move(all_missing), first_incomplete);

  ComparisonReport report;
  report.catalogue_id = catalogue.id;
  report.catalogue_version = catalogue.version;
  std::vector<MatchingScoreResult> scored;
  scored.reserve(profiles.size());
  for (const auto& p : profiles) scored.push_back(matching_score(catalogue, p, profiles));
  std::stable_sort(scored.begin(), scored.end(),
                   [](const MatchingScoreResult& a, const MatchingScoreResult& b) { return a.ms > b.ms; });

  for (std::size_t i = 0; i < scored.size(); ++i) {
    RankedResult ranked{i + 1, false, std::move(scored[i])};
    report.cohort.push_back(std::move(ranked));
  }
  for (std::size_t i = 0; i + 1 < report.cohort.size(); ++i) {
    if (std::abs(report.cohort[i].result.ms - report.cohort[i + 1].result.ms) <= kTieTolerance) {
      report.cohort[i].tie = true;
      report.cohort[i + 1].tie = true;
    }
  }
  for (const auto& r : report.cohort) {
    if (!r.result.failed_showstoppers.empty())
      report.disqualified.push_back({r.result.solution, r.result.failed_showstoppers});
  }
  return report;
}

Catalogue apply_catalogue_perturbations(const Catalogue& catalogue, std::span<const Perturbation> perturbations) {
  if (catalogue.layer != 3) throw WrongLayerError(3, catalogue.layer);
  Catalogue out = catalogue;
  std::vector<Issue> issues;
  std::set<CriterionIndex> touched;
  bool ratings_changed = false;

  for (const auto& p : perturbations) {
    if (const auto* s = std::get_if<SetRating>(&p)) {
      Criterion* c = out.find(s->index);
      if (!c) {
        issues.push_back(make_issue(score_error::kUnknownIndex, s->index, "unknown index " + s->index.str()));
        continue;
      }
      if (s->rating < 1 || s->rating > 5) {
        issues.push_back(make_issue(score_error::kInvalidRating, s->index,
                                    "rating " + std::to_string(s->rating) + " is outside 1..5"));
        continue;
      }
      c->rating = s->rating;
      touched.insert(s->index);
      ratings_changed = true;
    } else if (const auto* t = std::get_if<ToggleShowstopper>(&p)) {
      Criterion* c = out.find(t->index);
      if (!c) {
        issues.push_back(make_issue(score_error::kUnknownIndex, t->index, "unknown index " + t->index.str()));
        continue;
      }
      c->showstopper = !c->showstopper.value_or(false);
      touched.insert(t->index);
    }
  }
  if (!issues.empty()) {
    const auto code = issues.front().code;
    const auto message = "invalid perturbation: " + issues.front().message;
    throw ScoringError(code, message, std::move(issues));
  }

  if (ratings_changed) {
    std::vector<int> ratings;
    for (const auto& c : out.criteria) {
      if (!c.rating)
        throw ScoringError(score_error::kBreaksValidation, c.index.str() + " has no rating to re-normalise",
                           {make_issue(score_error::kBreaksValidation, c.index, "missing rating")});
      ratings.push_back(*c.rating);
    }
    const auto weights = normalize_weights(ratings);
    for (std::size_t i = 0; i < out.criteria.size(); ++i) out.criteria[i].weight = weights[i];
  }

  for (auto& c : out.criteria) {
    if (!touched.count(c.index)) continue;
    std::optional<IntervalScale> bins;
    if (c.scale && std::holds_alternative<IntervalScale>(*c.scale)) {
      bins = std::get<IntervalScale>(*c.scale);
    } else {
      for (const auto& d : catalogue.provenance) {
        if (const auto* di = std::get_if<DefineIntervalsDirective>(&d); di && di->index == c.index)
          bins = IntervalScale{"", di->bins, di->illustrative};
      }
    }
    c.scale = assign_scale(c.rating.value_or(1), c.showstopper.value_or(false), c.answer_kind, bins);
  }

  if (auto report = validate_catalogue(out); !report.ok()) {
    std::vector<Issue> v_issues;
    for (const auto& v : report.violations)
      v_issues.push_back(Issue{std::string(score_error::kBreaksValidation), v.index, v.rule + ": " + v.message});
    throw ScoringError(score_error::kBreaksValidation, "perturbed catalogue fails validation:\n" + report.to_string(),
                       std::move(v_issues));
  }
  return out;
}

WhatIfResult whatif(const Catalogue& catalogue, std::span<const SolutionProfile> profiles,
                    std::span<const Perturbation> perturbations) {
  WhatIfResult out;
  out.before = compare(catalogue, profiles);

  const Catalogue perturbed = apply_catalogue_perturbations(catalogue, perturbations);
  std::vector<SolutionProfile> adjusted(profiles.begin(), profiles.end());

  std::vector<Issue> issues;
  for (const auto& p : perturbations) {
    const auto* o = std::get_if<OverrideAnswer>(&p);
    if (!o) continue;
    auto it = std::find_if(adjusted.begin(), adjusted.end(),
                           [&](const SolutionProfile& s) { return s.name == o->solution; });
    if (it == adjusted.end()) {
      issues.push_back(make_issue(score_error::kUnknownSolution, o->index, "unknown solution '" + o->solution + "'"));
      continue;
    }
    if (!perturbed.find(o->index)) {
      issues.push_back(make_issue(score_error::kUnknownIndex, o->index, "unknown index " + o->index.str()));
      continue;
    }
    it->answers[o->index] = o->answer;
  }
  if (!issues.empty()) {
    const auto code = issues.front().code;
    const auto message = "invalid perturbation: " + issues.front().message;
    throw ScoringError(code, message, std::move(issues));
  }

  for (const auto& s : adjusted) {
    for (const auto& c : perturbed.criteria) {
      auto it = s.answers.find(c.index);
      if (it != s.answers.end() && !answer_fits_scale(it->second, *c.scale))
        issues.push_back(make_issue(score_error::kBreaksValidation, c.index,
                                    "solution '" + s.name + "' answers " + c.index.str() + " with a " +
                                        std::string(answer_name(it->second)) + " value but the scale is now " +
                                        std::string(scale_name(*c.scale))));
    }
  }
  if (!issues.empty())
    throw ScoringError(score_error::kBreaksValidation, "perturbation leaves answers that no longer fit their scale",
                       std::move(issues));

  out.after = compare(perturbed, adjusted);
  for (const auto& b : out.before.cohort) {
    auto it = std::find_if(out.after.cohort.begin(), out.after.cohort.end(),
                           [&](const RankedResult& a) { return a.result.solution == b.result.solution; });
    if (it != out.after.cohort.end() && it->position != b.position)
      out.rank_changes.push_back({b.result.solution, b.position, it->position});
  }
  return out;
}

}  // namespace critcat
