#pragma once

// Matching Scores for candidate solutions against a layer-3 catalogue.
//
// ms = sum over Boolean criteria  (answer in {0,1})   * weight
//    + sum over numeric criteria  (normalised answer) * weight
//    + sum over Likert criteria   (answer in 1..5)    * weight
//
// Numeric answers are min-max normalised across the cohort being compared,
// so a score is only meaningful together with the cohort it was computed in.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "critcat/catalogue_model.hpp"

namespace critcat {

struct BooleanAnswer {
  int value = 0;
  friend bool operator==(const BooleanAnswer&, const BooleanAnswer&) = default;
};

struct LikertAnswer {
  int value = 1;
  friend bool operator==(const LikertAnswer&, const LikertAnswer&) = default;
};

struct NumericAnswer {
  double raw = 0.0;
  std::string unit;
  friend bool operator==(const NumericAnswer&, const NumericAnswer&) = default;
};

using AnswerValue = std::variant<BooleanAnswer, LikertAnswer, NumericAnswer>;

struct SolutionProfile {
  std::string name;
  std::string vendor;
  std::map<CriterionIndex, AnswerValue> answers;
  std::string notes;

  friend bool operator==(const SolutionProfile&, const SolutionProfile&) = default;
};

struct CriterionContribution {
  CriterionIndex index;
  double contribution = 0.0;
  friend bool operator==(const CriterionContribution&, const CriterionContribution&) = default;
};

struct MatchingScoreResult {
  std::string solution;
  double ms = 0.0;
  double ms_max = 0.0;
  double ms_fraction = 0.0;
  std::vector<CriterionContribution> per_criterion;
  std::map<std::string, double> per_category;
  std::vector<CriterionIndex> failed_showstoppers;

  friend bool operator==(const MatchingScoreResult&, const MatchingScoreResult&) = default;
};

struct RankedResult {
  std::size_t position = 0;  // 1-based ordinal position in the sorted cohort
  bool tie = false;          // shares its ms with a neighbour
  MatchingScoreResult result;

  friend bool operator==(const RankedResult&, const RankedResult&) = default;
};

struct Disqualification {
  std::string solution;
  std::vector<CriterionIndex> failed_showstoppers;
  friend bool operator==(const Disqualification&, const Disqualification&) = default;
};

struct ComparisonReport {
  std::string catalogue_id;
  std::uint64_t catalogue_version = 0;
  std::vector<RankedResult> cohort;
  std::vector<Disqualification> disqualified;

  friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

namespace score_error {
inline constexpr std::string_view kRawNotInCohort = "raw-not-in-cohort";
inline constexpr std::string_view kEmptyCohort = "empty-cohort";
inline constexpr std::string_view kOutOfRange = "out-of-range";
inline constexpr std::string_view kScaleMismatch = "scale-mismatch";
inline constexpr std::string_view kInvalidAnswer = "invalid-answer";
inline constexpr std::string_view kMissingAnswer = "missing-answer";
inline constexpr std::string_view kNotInCohort = "profile-not-in-cohort";
inline constexpr std::string_view kInvalidCatalogue = "invalid-catalogue";
inline constexpr std::string_view kNoProfiles = "no-profiles";
inline constexpr std::string_view kDuplicateSolution = "duplicate-solution";
inline constexpr std::string_view kUnknownIndex = "unknown-index";
inline constexpr std::string_view kUnknownSolution = "unknown-solution";
inline constexpr std::string_view kInvalidRating = "invalid-rating";
inline constexpr std::string_view kBreaksValidation = "perturbation-breaks-validation";
}  // namespace score_error

/// Raised by scoring operations. For missing answers, issues() lists every
/// missing index and solution() names the profile.
class ScoringError : public Error {
 public:
  ScoringError(std::string_view code, std::string message, std::vector<Issue> issues = {},
               std::string solution = {});
  const std::string& solution() const noexcept { return solution_; }

 private:
  std::string solution_;
};

/// Two Matching Scores within this distance are reported as a tie.
inline constexpr double kTieTolerance = 1e-9;

/// Cohort min-max normalisation to [0,1]; a zero-width cohort maps to 0.5.
double normalize_numeric(double raw, std::span<const double> cohort_values, Polarity polarity);

/// (i-1)/(B-1) for the 1-based bin i (worst -> best) containing raw.
double interval_score(double raw, const IntervalScale& scale);

/// Raw numeric answers to one criterion across a cohort.
struct CohortContext {
  std::vector<double> numeric_values;
};

double answer_contribution(const AnswerValue& answer, const Criterion& criterion,
                           const CohortContext& cohort_context = {});

/// Scores one profile. The catalogue must be layer 3 with a scale and weight
/// on every criterion; `cohort` must contain `profile` (matched by name).
MatchingScoreResult matching_score(const Catalogue& catalogue, const SolutionProfile& profile,
                                   std::span<const SolutionProfile> cohort);

/// Scores every profile against the whole list and ranks descending by ms.
ComparisonReport compare(const Catalogue& catalogue, std::span<const SolutionProfile> profiles);

// ---------------------------------------------------------------------------
// What-if analysis
// ---------------------------------------------------------------------------

struct SetRating {
  CriterionIndex index;
  int rating = 0;
  friend bool operator==(const SetRating&, const SetRating&) = default;
};

struct ToggleShowstopper {
  CriterionIndex index;
  friend bool operator==(const ToggleShowstopper&, const ToggleShowstopper&) = default;
};

struct OverrideAnswer {
  std::string solution;
  CriterionIndex index;
  AnswerValue answer;
  friend bool operator==(const OverrideAnswer&, const OverrideAnswer&) = default;
};

using Perturbation = std::variant<SetRating, ToggleShowstopper, OverrideAnswer>;

struct RankChange {
  std::string solution;
  std::size_t before_position = 0;
  std::size_t after_position = 0;
  friend bool operator==(const RankChange&, const RankChange&) = default;
};

struct WhatIfResult {
  ComparisonReport before;
  ComparisonReport after;
  std::vector<RankChange> rank_changes;
  friend bool operator==(const WhatIfResult&, const WhatIfResult&) = default;
};

/// Applies the SetRating/ToggleShowstopper perturbations to a copy of the
/// catalogue. Weights are re-normalised from ratings when any rating changes;
/// scales are re-assigned for the touched criteria only.
Catalogue apply_catalogue_perturbations(const Catalogue& catalogue,
                                        std::span<const Perturbation> perturbations);

WhatIfResult whatif(const Catalogue& catalogue, std::span<const SolutionProfile> profiles,
                    std::span<const Perturbation> perturbations);

}  // namespace critcat
