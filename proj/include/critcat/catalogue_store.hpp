#pragma once

// JSON documents for catalogues, derivation scripts, solution profiles and
// reports, plus the embedded MaaS/SME fixture set.
//
// Documents are UTF-8 JSON with an explicit format_version. Every field is
// written, absent optionals as null, and keys are emitted in sorted order so
// equal values always serialize to identical bytes.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "critcat/catalogue_model.hpp"
#include "critcat/layer_engine.hpp"
#include "critcat/scoring_engine.hpp"

namespace critcat {

inline constexpr int kFormatVersion = 1;

namespace store_error {
inline constexpr std::string_view kMalformed = "malformed-document";
inline constexpr std::string_view kUnsupportedVersion = "unsupported-format-version";
inline constexpr std::string_view kValidationFailure = "validation-failure";
inline constexpr std::string_view kIo = "io-error";
}  // namespace store_error

class StoreError : public Error {
 public:
  StoreError(std::string_view code, std::string message);

  /// Position of a syntax error, 1-based.
  std::optional<std::size_t> line;
  std::optional<std::size_t> column;
  /// Set for validation-failure.
  ValidationReport report;
};

// JSON-level codecs, shared with the workbench service.
nlohmann::json to_json(const Catalogue& catalogue);
nlohmann::json to_json(const Criterion& criterion);
nlohmann::json to_json(const Directive& directive);
nlohmann::json to_json(const DerivationScript& script);
nlohmann::json to_json(const SolutionProfile& profile);
nlohmann::json to_json(const AnswerValue& answer);
nlohmann::json to_json(const ComparisonReport& report);
nlohmann::json to_json(const WhatIfResult& result);
nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const CatalogueStats& stats);
nlohmann::json to_json(const Perturbation& perturbation);

/// The `*_from_json` functions throw StoreError(malformed-document) naming the
/// JSON path of the offending value. They do not run catalogue validation.
Catalogue catalogue_from_json(const nlohmann::json& j);
Directive directive_from_json(const nlohmann::json& j, const std::string& path = "");
DerivationScript script_from_json(const nlohmann::json& j);
SolutionProfile profile_from_json(const nlohmann::json& j);
AnswerValue answer_from_json(const nlohmann::json& j, const std::string& path = "");
ComparisonReport report_from_json(const nlohmann::json& j);
Perturbation perturbation_from_json(const nlohmann::json& j, const std::string& path = "");

/// Parses text as JSON; syntax errors carry line and column.
nlohmann::json parse_json(std::string_view bytes);

/// Canonical text form: two-space indent, sorted keys, trailing newline.
std::string dump_canonical(const nlohmann::json& j);

std::string serialize_catalogue(const Catalogue& catalogue);
/// Parses and validates for the declared layer.
Catalogue load_catalogue(std::string_view bytes);

std::string serialize_script(const DerivationScript& script);
DerivationScript load_script(std::string_view bytes);

std::string serialize_profile(const SolutionProfile& profile);
SolutionProfile load_profile(std::string_view bytes);

enum class ReportFormat { Structured, Table, Markdown };
std::optional<ReportFormat> parse_report_format(std::string_view text);

std::string save_report(const ComparisonReport& report, ReportFormat format,
                        DecimalMark mark = DecimalMark::Comma);
ComparisonReport load_report(std::string_view bytes);

std::string save_whatif(const WhatIfResult& result, ReportFormat format,
                        DecimalMark mark = DecimalMark::Comma);

/// Score rendered with at most four decimals and no trailing zeros, e.g. "2.2".
std::string format_score(double value);

std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

struct FixtureSet {
  Catalogue general_catalogue;      // layer 1, 62 criteria
  DerivationScript maas_refinement;  // layer 1 -> 2
  DerivationScript maas_weighting;   // layer 2 -> 3
  Catalogue maas_expected_layer3;   // the published final list, transcribed
};

/// Labels for the MaaS catalogues produced from the general fixture.
DerivationLabels maas_layer2_labels();
DerivationLabels maas_layer3_labels();

/// Criteria whose published scale contradicts the scale rules (rating 3
/// printed as Likert); derived catalogues differ from the fixture only here.
const std::vector<CriterionIndex>& documented_scale_exceptions();

const FixtureSet& load_fixtures();

}  // namespace critcat
