#include "critcat/catalogue_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "overloaded.hpp"

namespace critcat {

namespace {

using detail::Overloaded;

std::optional<int> parse_positive(std::string_view text) {
  if (text.empty()) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 1) return std::nullopt;
  return value;
}

}  // namespace

std::string CriterionIndex::str() const {
  return std::to_string(major) + "." + std::to_string(minor);
}

std::optional<CriterionIndex> CriterionIndex::parse(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  auto major = parse_positive(text.substr(0, dot));
  auto minor = parse_positive(text.substr(dot + 1));
  if (!major || !minor) return std::nullopt;
  return CriterionIndex{*major, *minor};
}

std::string_view to_string(Polarity p) {
  return p == Polarity::Benefit ? "benefit" : "cost";
}

std::optional<Polarity> parse_polarity(std::string_view text) {
  if (text == "benefit") return Polarity::Benefit;
  if (text == "cost") return Polarity::Cost;
  return std::nullopt;
}

std::string_view scale_name(const ScaleSpec& scale) {
  return std::visit(Overloaded{[](const BooleanScale&) { return std::string_view{"boolean"}; },
                               [](const LikertScale&) { return std::string_view{"likert"}; },
                               [](const NumericScale&) { return std::string_view{"numeric"}; },
                               [](const IntervalScale&) { return std::string_view{"intervals"}; }},
                    scale);
}

std::string check_interval_bins(const std::vector<IntervalBin>& bins) {
  if (bins.size() < 2) return "an interval scale needs at least two bins";
  for (const auto& bin : bins) {
    if (!std::isfinite(bin.lower) || !std::isfinite(bin.upper))
      return "bin '" + bin.label + "' has a non-finite edge";
    if (!(bin.lower < bin.upper)) return "bin '" + bin.label + "' is empty or inverted";
  }
  const bool ascending = bins[0].upper <= bins[1].lower;
  for (std::size_t i = 0; i + 1 < bins.size(); ++i) {
    const auto& a = bins[i];
    const auto& b = bins[i + 1];
    const bool contiguous = ascending ? a.upper == b.lower : a.lower == b.upper;
    if (!contiguous)
      return "bins '" + a.label + "' and '" + b.label + "' are not contiguous or not monotone";
  }
  return {};
}

std::optional<std::size_t> locate_bin(const std::vector<IntervalBin>& bins, double raw) {
  if (bins.empty()) return std::nullopt;
  std::size_t top = 0;
  for (std::size_t i = 1; i < bins.size(); ++i)
    if (bins[i].upper > bins[top].upper) top = i;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const auto& bin = bins[i];
    if (raw >= bin.lower && (raw < bin.upper || (i == top && raw == bin.upper))) return i;
  }
  return std::nullopt;
}

bool is_refinement(const Directive& d) {
  return std::holds_alternative<RemoveDirective>(d) || std::holds_alternative<RewordDirective>(d);
}

bool is_weighting(const Directive& d) {
  return std::holds_alternative<RateDirective>(d) ||
         std::holds_alternative<MarkShowstopperDirective>(d) ||
         std::holds_alternative<DefineIntervalsDirective>(d) ||
         std::holds_alternative<RewordForScaleDirective>(d);
}

std::optional<CriterionIndex> directive_index(const Directive& d) {
  return std::visit(Overloaded{[](const ScaleRulePolicy&) -> std::optional<CriterionIndex> {
                                 return std::nullopt;
                               },
                               [](const auto& x) -> std::optional<CriterionIndex> { return x.index; }},
                    d);
}

std::string_view directive_kind(const Directive& d) {
  return std::visit(
      Overloaded{[](const RemoveDirective&) { return std::string_view{"remove"}; },
                 [](const RewordDirective&) { return std::string_view{"reword"}; },
                 [](const RateDirective&) { return std::string_view{"rate"}; },
                 [](const MarkShowstopperDirective&) { return std::string_view{"mark_showstopper"}; },
                 [](const DefineIntervalsDirective&) { return std::string_view{"define_intervals"}; },
                 [](const RewordForScaleDirective&) { return std::string_view{"reword_for_scale"}; },
                 [](const ScaleRulePolicy&) { return std::string_view{"scale_rule_policy"}; }},
      d);
}

const Criterion* Catalogue::find(const CriterionIndex& index) const {
  auto it = std::find_if(criteria.begin(), criteria.end(),
                         [&](const Criterion& c) { return c.index == index; });
  return it == criteria.end() ? nullptr : &*it;
}

Criterion* Catalogue::find(const CriterionIndex& index) {
  auto it = std::find_if(criteria.begin(), criteria.end(),
                         [&](const Criterion& c) { return c.index == index; });
  return it == criteria.end() ? nullptr : &*it;
}

bool ValidationReport::has(std::string_view rule_id) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.rule == rule_id; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << "[" << v.rule << "]";
    if (v.index) out << " " << v.index->str();
    out << ": " << v.message << "\n";
  }
  return out.str();
}

ValidationReport validate_catalogue(const Catalogue& catalogue) {
  ValidationReport report;
  auto add = [&](std::optional<CriterionIndex> index, std::string_view rule_id, std::string message) {
    report.violations.push_back(Violation{index, std::string(rule_id), std::move(message)});
  };

  const int layer = catalogue.layer;
  if (layer < 1 || layer > 3) {
    add(std::nullopt, rule::kInvalidLayer, "layer must be 1, 2 or 3, got " + std::to_string(layer));
  }

  std::set<CriterionIndex> seen;
  double weight_sum = 0.0;
  for (const auto& c : catalogue.criteria) {
    const auto& idx = c.index;
    if (idx.major < 1 || idx.minor < 1) add(idx, rule::kInvalidIndex, "index parts must be >= 1");
    if (!seen.insert(idx).second) add(idx, rule::kDuplicateIndex, "index " + idx.str() + " appears more than once");
    if (c.question.empty()) add(idx, rule::kEmptyQuestion, "question text is empty");
    if (c.rating && (*c.rating < 1 || *c.rating > 5))
      add(idx, rule::kRatingOutOfRange, "rating " + std::to_string(*c.rating) + " is outside 1..5");
    if (c.weight && !(*c.weight > 0.0 && *c.weight <= 1.0))
      add(idx, rule::kWeightOutOfRange, "weight must lie in (0, 1]");
    if (c.weight) weight_sum += *c.weight;

    if (c.scale) {
      if (const auto* intervals = std::get_if<IntervalScale>(&*c.scale)) {
        if (auto problem = check_interval_bins(intervals->bins); !problem.empty())
          add(idx, rule::kInvalidBins, problem);
      }
      const bool numeric_scale = std::holds_alternative<NumericScale>(*c.scale) ||
                                 std::holds_alternative<IntervalScale>(*c.scale);
      if (numeric_scale && !is_numeric(c.answer_kind))
        add(idx, rule::kNumericScaleOnQualitative, "numeric scale on a qualitative question");
    }

    if (layer == 3) {
      if (!c.rating) add(idx, rule::kMissingRating, "layer-3 criterion has no rating");
      if (!c.showstopper) add(idx, rule::kMissingShowstopper, "layer-3 criterion has no showstopper flag");
      if (!c.scale) add(idx, rule::kMissingScale, "layer-3 criterion has no scale");
      if (!c.weight) add(idx, rule::kMissingWeight, "layer-3 criterion has no weight");
      if (c.showstopper.value_or(false) && c.scale && !std::holds_alternative<BooleanScale>(*c.scale))
        add(idx, rule::kShowstopperBoolean,
            "showstopper criterion has " + std::string(scale_name(*c.scale)) + " scale");
    } else if (layer == 1 || layer == 2) {
      if (c.rating) add(idx, rule::kUnexpectedRating, "rating present below layer 3");
      if (c.showstopper) add(idx, rule::kUnexpectedShowstopper, "showstopper flag present below layer 3");
      if (c.scale) add(idx, rule::kUnexpectedScale, "scale present below layer 3");
      if (c.weight) add(idx, rule::kUnexpectedWeight, "weight present below layer 3");
    }
  }

  if (layer == 3 && std::abs(weight_sum - 1.0) > kWeightSumTolerance) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "weights sum to %.12g", weight_sum);
    add(std::nullopt, rule::kWeightsSum, buf);
  }
  return report;
}

Error::Error(std::string code, std::string message, std::vector<Issue> issues)
    : std::runtime_error(std::move(message)), code_(std::move(code)), issues_(std::move(issues)) {}

WrongLayerError::WrongLayerError(int expected, int actual)
    : Error("wrong-layer", "expected a layer-" + std::to_string(expected) + " catalogue, got layer " +
                               std::to_string(actual)) {}

CatalogueStats catalogue_stats(const Catalogue& catalogue) {
  if (catalogue.layer != 3) throw WrongLayerError(3, catalogue.layer);
  CatalogueStats stats;
  for (const auto& c : catalogue.criteria) {
    if (!c.scale) throw Error("missing-scale", "criterion " + c.index.str() + " has no scale");
    std::visit(Overloaded{[&](const BooleanScale&) { ++stats.n_boolean; },
                          [&](const LikertScale&) { ++stats.n_likert; },
                          [&](const NumericScale&) { ++stats.n_numeric; },
                          [&](const IntervalScale&) { ++stats.n_numeric; }},
               *c.scale);
  }
  stats.n_total = catalogue.criteria.size();
  return stats;
}

std::string format_percent(double fraction, DecimalMark mark) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f%%", fraction * 100.0);
  std::string text(buf);
  if (mark == DecimalMark::Comma) std::replace(text.begin(), text.end(), '.', ',');
  return text;
}

}  // namespace critcat
