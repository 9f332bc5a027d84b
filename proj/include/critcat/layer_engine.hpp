#pragma once

// Layer transitions. Layer 1 -> 2 removes and rewords criteria for a domain;
// layer 2 -> 3 rates, flags showstoppers, assigns scales and normalises weights.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "critcat/catalogue_model.hpp"

namespace critcat {

struct DerivationScript {
  int target_layer = 2;
  std::vector<Directive> directives;

  friend bool operator==(const DerivationScript&, const DerivationScript&) = default;
};

/// Header overrides for a derived catalogue. Unset fields are inherited from
/// the source, except id which defaults to "<source id>-l<layer>".
struct DerivationLabels {
  std::optional<std::string> id;
  std::optional<std::string> title;
  std::optional<std::string> domain_label;
  std::optional<std::string> context_label;
};

/// Error codes raised by the derivation operations.
namespace derive_error {
inline constexpr std::string_view kUnknownIndex = "unknown-index";
inline constexpr std::string_view kDirectiveAfterRemoval = "directive-after-removal";
inline constexpr std::string_view kDirectiveNotAllowed = "directive-not-allowed";
inline constexpr std::string_view kMissingRating = "missing-rating";
inline constexpr std::string_view kDuplicateRating = "duplicate-rating";
inline constexpr std::string_view kInvalidRating = "invalid-rating";
inline constexpr std::string_view kBinsOnQualitative = "bins-on-qualitative";
inline constexpr std::string_view kInvalidBins = "invalid-bins";
inline constexpr std::string_view kEmptyText = "empty-text";
inline constexpr std::string_view kUnsupportedPolicy = "unsupported-scale-policy";
inline constexpr std::string_view kWrongTarget = "wrong-target-layer";
inline constexpr std::string_view kEmptyList = "empty-list";
}  // namespace derive_error

/// Thrown by the derive operations; issues() lists every problem in the script.
class DerivationError : public Error {
 public:
  explicit DerivationError(std::vector<Issue> issues);
};

/// The scale-rule order this engine applies: showstopper, numeric kind,
/// rating 4-5, rating 1-3.
const ScaleRulePolicy& engine_scale_policy();

/// Maps rating, showstopper flag and answer kind to a scale. `bins` selects an
/// IntervalScale for numeric questions that had intervals defined.
ScaleSpec assign_scale(int rating, bool showstopper, const AnswerKind& answer_kind,
                       const std::optional<IntervalScale>& bins = std::nullopt);

/// weight_i = rating_i / sum(ratings).
std::vector<double> normalize_weights(std::span<const int> ratings);

Catalogue derive_layer2(const Catalogue& layer1, const DerivationScript& script,
                        const DerivationLabels& labels = {});

Catalogue derive_layer3(const Catalogue& layer2, const DerivationScript& script,
                        const DerivationLabels& labels = {});

/// Dispatches on script.target_layer.
Catalogue derive(const Catalogue& source, const DerivationScript& script,
                 const DerivationLabels& labels = {});

/// Indices referenced by the script that are absent from the source, as
/// unknown-index issues. Used to vet directive batches before they are final.
std::vector<Issue> check_directive_indices(const Catalogue& source,
                                           std::span<const Directive> directives);

}  // namespace critcat
