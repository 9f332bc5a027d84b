#pragma once

// Domain types shared by every critcat module: criteria, scales, catalogues,
// and the structural validation applied at each catalogue layer.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace critcat {

/// "major.minor" position of a criterion, e.g. 2.4.
struct CriterionIndex {
  int major = 0;
  int minor = 0;

  std::string str() const;
  static std::optional<CriterionIndex> parse(std::string_view text);

  friend auto operator<=>(const CriterionIndex&, const CriterionIndex&) = default;
  friend bool operator==(const CriterionIndex&, const CriterionIndex&) = default;
};

enum class Polarity { Benefit, Cost };

std::string_view to_string(Polarity p);
std::optional<Polarity> parse_polarity(std::string_view text);

struct Qualitative {
  friend bool operator==(const Qualitative&, const Qualitative&) = default;
};

struct NumericQuantity {
  std::string unit;
  Polarity polarity = Polarity::Benefit;

  friend bool operator==(const NumericQuantity&, const NumericQuantity&) = default;
};

using AnswerKind = std::variant<Qualitative, NumericQuantity>;

inline bool is_numeric(const AnswerKind& kind) {
  return std::holds_alternative<NumericQuantity>(kind);
}

// ---------------------------------------------------------------------------
// Scales
// ---------------------------------------------------------------------------

struct BooleanScale {
  friend bool operator==(const BooleanScale&, const BooleanScale&) = default;
};

/// Five-level agreement scale, answered 1 (strongly disagree) .. 5 (strongly agree).
struct LikertScale {
  friend bool operator==(const LikertScale&, const LikertScale&) = default;
};

struct NumericScale {
  std::string unit;
  Polarity polarity = Polarity::Benefit;

  friend bool operator==(const NumericScale&, const NumericScale&) = default;
};

/// Half-open raw-value range [lower, upper). The bin holding the largest
/// upper edge of its scale is closed on that edge.
struct IntervalBin {
  std::string label;
  double lower = 0.0;
  double upper = 0.0;

  friend bool operator==(const IntervalBin&, const IntervalBin&) = default;
};

/// Numeric answer read through ordered bins, listed worst -> best.
struct IntervalScale {
  std::string unit;
  std::vector<IntervalBin> bins;
  bool illustrative = false;

  friend bool operator==(const IntervalScale&, const IntervalScale&) = default;
};

using ScaleSpec = std::variant<BooleanScale, LikertScale, NumericScale, IntervalScale>;

std::string_view scale_name(const ScaleSpec& scale);

/// Empty string when the bins are well formed, otherwise the first problem found.
std::string check_interval_bins(const std::vector<IntervalBin>& bins);

/// 0-based position of the bin containing raw, if any.
std::optional<std::size_t> locate_bin(const std::vector<IntervalBin>& bins, double raw);

// ---------------------------------------------------------------------------
// Criteria and catalogues
// ---------------------------------------------------------------------------

struct Criterion {
  CriterionIndex index;
  std::string category;
  std::string question;
  std::string original_question;
  AnswerKind answer_kind = Qualitative{};
  std::optional<int> rating;
  std::optional<bool> showstopper;
  std::optional<ScaleSpec> scale;
  std::optional<double> weight;
  std::optional<std::string> justification;

  friend bool operator==(const Criterion&, const Criterion&) = default;
};

// Derivation directives live here because catalogues record them as provenance.

struct RemoveDirective {
  CriterionIndex index;
  std::string justification;
  friend bool operator==(const RemoveDirective&, const RemoveDirective&) = default;
};

struct RewordDirective {
  CriterionIndex index;
  std::string new_question;
  std::optional<AnswerKind> new_answer_kind;
  std::string justification;
  friend bool operator==(const RewordDirective&, const RewordDirective&) = default;
};

struct RateDirective {
  CriterionIndex index;
  int rating = 0;
  std::optional<std::string> justification;
  friend bool operator==(const RateDirective&, const RateDirective&) = default;
};

struct MarkShowstopperDirective {
  CriterionIndex index;
  bool flag = true;
  friend bool operator==(const MarkShowstopperDirective&, const MarkShowstopperDirective&) = default;
};

struct DefineIntervalsDirective {
  CriterionIndex index;
  std::vector<IntervalBin> bins;
  bool illustrative = false;
  friend bool operator==(const DefineIntervalsDirective&, const DefineIntervalsDirective&) = default;
};

struct RewordForScaleDirective {
  CriterionIndex index;
  std::string new_question;
  friend bool operator==(const RewordForScaleDirective&, const RewordForScaleDirective&) = default;
};

/// Records the scale-rule evaluation order a layer-3 catalogue was derived with.
struct ScaleRulePolicy {
  std::vector<std::string> order;
  friend bool operator==(const ScaleRulePolicy&, const ScaleRulePolicy&) = default;
};

using Directive = std::variant<RemoveDirective, RewordDirective, RateDirective,
                               MarkShowstopperDirective, DefineIntervalsDirective,
                               RewordForScaleDirective, ScaleRulePolicy>;

bool is_refinement(const Directive& d);
bool is_weighting(const Directive& d);
std::optional<CriterionIndex> directive_index(const Directive& d);
std::string_view directive_kind(const Directive& d);

struct Catalogue {
  std::string id;
  int layer = 1;
  std::string title;
  std::string domain_label;
  std::string context_label;
  std::vector<Criterion> criteria;
  std::vector<Directive> provenance;
  std::uint64_t version = 1;

  const Criterion* find(const CriterionIndex& index) const;
  Criterion* find(const CriterionIndex& index);

  friend bool operator==(const Catalogue&, const Catalogue&) = default;
};

/// Counts per scale family: N = K + L + M.
struct CatalogueStats {
  std::size_t n_total = 0;
  std::size_t n_numeric = 0;
  std::size_t n_boolean = 0;
  std::size_t n_likert = 0;

  friend bool operator==(const CatalogueStats&, const CatalogueStats&) = default;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace rule {
inline constexpr std::string_view kInvalidLayer = "invalid-layer";
inline constexpr std::string_view kInvalidIndex = "invalid-index";
inline constexpr std::string_view kDuplicateIndex = "duplicate-index";
inline constexpr std::string_view kEmptyQuestion = "empty-question";
inline constexpr std::string_view kRatingOutOfRange = "rating-out-of-range";
inline constexpr std::string_view kWeightOutOfRange = "weight-out-of-range";
inline constexpr std::string_view kMissingRating = "missing-rating";
inline constexpr std::string_view kMissingShowstopper = "missing-showstopper";
inline constexpr std::string_view kMissingScale = "missing-scale";
inline constexpr std::string_view kMissingWeight = "missing-weight";
inline constexpr std::string_view kUnexpectedRating = "unexpected-rating";
inline constexpr std::string_view kUnexpectedShowstopper = "unexpected-showstopper";
inline constexpr std::string_view kUnexpectedScale = "unexpected-scale";
inline constexpr std::string_view kUnexpectedWeight = "unexpected-weight";
inline constexpr std::string_view kWeightsSum = "weights-must-sum-to-one";
inline constexpr std::string_view kShowstopperBoolean = "showstopper-must-be-boolean";
inline constexpr std::string_view kInvalidBins = "invalid-interval-bins";
inline constexpr std::string_view kNumericScaleOnQualitative = "numeric-scale-on-qualitative";
}  // namespace rule

struct Violation {
  std::optional<CriterionIndex> index;  // empty for catalogue-level rules
  std::string rule;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view rule_id) const;
  std::string to_string() const;

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

inline constexpr double kWeightSumTolerance = 1e-9;

/// Checks every structural invariant for the catalogue's declared layer and
/// reports all violations.
ValidationReport validate_catalogue(const Catalogue& catalogue);

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// One item of a multi-item failure, e.g. a missing rating for one criterion.
struct Issue {
  std::string code;
  std::optional<CriterionIndex> index;
  std::string message;
};

/// Base error carrying a machine-readable code and every issue found.
class Error : public std::runtime_error {
 public:
  Error(std::string code, std::string message, std::vector<Issue> issues = {});

  const std::string& code() const noexcept { return code_; }
  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  std::string code_;
  std::vector<Issue> issues_;
};

/// Thrown when an operation receives a catalogue at the wrong layer.
class WrongLayerError : public Error {
 public:
  WrongLayerError(int expected, int actual);
};

CatalogueStats catalogue_stats(const Catalogue& catalogue);

/// Percentage with one decimal, e.g. 5/133 -> "3,8%" (comma) or "3.8%" (period).
enum class DecimalMark { Comma, Period };
std::string format_percent(double fraction, DecimalMark mark);

}  // namespace critcat
