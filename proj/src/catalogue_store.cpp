#include "critcat/catalogue_store.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "overloaded.hpp"

namespace critcat {

using detail::Overloaded;
using nlohmann::json;

StoreError::StoreError(std::string_view code, std::string message) : Error(std::string(code), std::move(message)) {}

namespace {

[[noreturn]] void malformed(const std::string& path, const std::string& what) {
  throw StoreError(store_error::kMalformed, "malformed document at " + (path.empty() ? "/" : path) + ": " + what);
}

void expect_object(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) malformed(path, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& key : keys)
    if (!j.contains(key)) malformed(path, std::string("missing field '") + key + "'");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) malformed(path, "unexpected field '" + it.key() + "'");
}

const json& at(const json& j, const char* key) { return j.at(key); }

std::string get_string(const json& j, const char* key, const std::string& path) {
  const auto& v = at(j, key);
  if (!v.is_string()) malformed(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

std::optional<std::string> get_opt_string(const json& j, const char* key, const std::string& path) {
  if (at(j, key).is_null()) return std::nullopt;
  return get_string(j, key, path);
}

long long get_int(const json& j, const char* key, const std::string& path) {
  const auto& v = at(j, key);
  if (!v.is_number_integer()) malformed(path + "/" + key, "expected an integer");
  return v.get<long long>();
}

double get_number(const json& j, const char* key, const std::string& path) {
  const auto& v = at(j, key);
  if (!v.is_number()) malformed(path + "/" + key, "expected a number");
  return v.get<double>();
}

bool get_bool(const json& j, const char* key, const std::string& path) {
  const auto& v = at(j, key);
  if (!v.is_boolean()) malformed(path + "/" + key, "expected true or false");
  return v.get<bool>();
}

const json& get_array(const json& j, const char* key, const std::string& path) {
  const auto& v = at(j, key);
  if (!v.is_array()) malformed(path + "/" + key, "expected an array");
  return v;
}

CriterionIndex parse_index_text(const std::string& text, const std::string& path) {
  auto idx = CriterionIndex::parse(text);
  if (!idx) malformed(path, "'" + text + "' is not a criterion index of the form major.minor");
  return *idx;
}

CriterionIndex get_index(const json& j, const char* key, const std::string& path) {
  return parse_index_text(get_string(j, key, path), path + "/" + key);
}

void check_format_version(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("format_version")) malformed(path, "missing field 'format_version'");
  const auto v = get_int(j, "format_version", path);
  if (v != kFormatVersion)
    throw StoreError(store_error::kUnsupportedVersion,
                     "unsupported format_version " + std::to_string(v) + " (expected " +
                         std::to_string(kFormatVersion) + ")");
}

Polarity get_polarity(const json& j, const char* key, const std::string& path) {
  auto p = parse_polarity(get_string(j, key, path));
  if (!p) malformed(path + "/" + key, "polarity must be 'benefit' or 'cost'");
  return *p;
}

json answer_kind_to_json(const AnswerKind& kind) {
  return std::visit(Overloaded{[](const Qualitative&) { return json{{"kind", "qualitative"}}; },
                               [](const NumericQuantity& n) {
                                 return json{{"kind", "numeric"},
                                             {"unit", n.unit},
                                             {"polarity", std::string(to_string(n.polarity))}};
                               }},
                    kind);
}

AnswerKind answer_kind_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind")) malformed(path, "answer_kind needs a 'kind'");
  const auto kind = get_string(j, "kind", path);
  if (kind == "qualitative") {
    expect_object(j, path, {"kind"});
    return Qualitative{};
  }
  if (kind == "numeric") {
    expect_object(j, path, {"kind", "unit", "polarity"});
    return NumericQuantity{get_string(j, "unit", path), get_polarity(j, "polarity", path)};
  }
  malformed(path + "/kind", "unknown answer kind '" + kind + "'");
}

json bins_to_json(const std::vector<IntervalBin>& bins) {
  json arr = json::array();
  for (const auto& b : bins) arr.push_back(json{{"label", b.label}, {"lower", b.lower}, {"upper", b.upper}});
  return arr;
}

std::vector<IntervalBin> bins_from_json(const json& arr, const std::string& path) {
  if (!arr.is_array()) malformed(path, "expected an array of bins");
  std::vector<IntervalBin> bins;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto p = path + "/" + std::to_string(i);
    expect_object(arr[i], p, {"label", "lower", "upper"});
    bins.push_back({get_string(arr[i], "label", p), get_number(arr[i], "lower", p), get_number(arr[i], "upper", p)});
  }
  return bins;
}

json scale_to_json(const ScaleSpec& scale) {
  return std::visit(Overloaded{[](const BooleanScale&) { return json{{"kind", "boolean"}}; },
                               [](const LikertScale&) { return json{{"kind", "likert"}}; },
                               [](const NumericScale& s) {
                                 return json{{"kind", "numeric"},
                                             {"unit", s.unit},
                                             {"polarity", std::string(to_string(s.polarity))}};
                               },
                               [](const IntervalScale& s) {
                                 return json{{"kind", "intervals"},
                                             {"unit", s.unit},
                                             {"bins", bins_to_json(s.bins)},
                                             {"illustrative", s.illustrative}};
                               }},
                    scale);
}

ScaleSpec scale_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind")) malformed(path, "scale needs a 'kind'");
  const auto kind = get_string(j, "kind", path);
  if (kind == "boolean") {
    expect_object(j, path, {"kind"});
    return BooleanScale{};
  }
  if (kind == "likert") {
    expect_object(j, path, {"kind"});
    return LikertScale{};
  }
  if (kind == "numeric") {
    expect_object(j, path, {"kind", "unit", "polarity"});
    return NumericScale{get_string(j, "unit", path), get_polarity(j, "polarity", path)};
  }
  if (kind == "intervals") {
    expect_object(j, path, {"kind", "unit", "bins", "illustrative"});
    return IntervalScale{get_string(j, "unit", path), bins_from_json(j.at("bins"), path + "/bins"),
                         get_bool(j, "illustrative", path)};
  }
  malformed(path + "/kind", "unknown scale kind '" + kind + "'");
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json indices_to_json(const std::vector<CriterionIndex>& indices) {
  json arr = json::array();
  for (const auto& i : indices) arr.push_back(i.str());
  return arr;
}

std::vector<CriterionIndex> indices_from_json(const json& arr, const std::string& path) {
  if (!arr.is_array()) malformed(path, "expected an array of indices");
  std::vector<CriterionIndex> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) malformed(path + "/" + std::to_string(i), "expected an index string");
    out.push_back(parse_index_text(arr[i].get<std::string>(), path + "/" + std::to_string(i)));
  }
  return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

// ---------------------------------------------------------------------------
// to_json
// ---------------------------------------------------------------------------

json to_json(const Criterion& c) {
  return json{{"index", c.index.str()},
              {"category", c.category},
              {"question", c.question},
              {"original_question", c.original_question},
              {"answer_kind", answer_kind_to_json(c.answer_kind)},
              {"rating", opt(c.rating)},
              {"showstopper", opt(c.showstopper)},
              {"scale", c.scale ? scale_to_json(*c.scale) : json(nullptr)},
              {"weight", opt(c.weight)},
              {"justification", opt(c.justification)}};
}

json to_json(const Directive& directive) {
  return std::visit(
      Overloaded{[](const RemoveDirective& d) {
                   return json{{"kind", "remove"}, {"index", d.index.str()}, {"justification", d.justification}};
                 },
                 [](const RewordDirective& d) {
                   return json{{"kind", "reword"},
                               {"index", d.index.str()},
                               {"new_question", d.new_question},
                               {"new_answer_kind",
                                d.new_answer_kind ? answer_kind_to_json(*d.new_answer_kind) : json(nullptr)},
                               {"justification", d.justification}};
                 },
                 [](const RateDirective& d) {
                   return json{{"kind", "rate"},
                               {"index", d.index.str()},
                               {"rating", d.rating},
                               {"justification", opt(d.justification)}};
                 },
                 [](const MarkShowstopperDirective& d) {
                   return json{{"kind", "mark_showstopper"}, {"index", d.index.str()}, {"flag", d.flag}};
                 },
                 [](const DefineIntervalsDirective& d) {
                   return json{{"kind", "define_intervals"},
                               {"index", d.index.str()},
                               {"bins", bins_to_json(d.bins)},
                               {"illustrative", d.illustrative}};
                 },
                 [](const RewordForScaleDirective& d) {
                   return json{{"kind", "reword_for_scale"}, {"index", d.index.str()}, {"new_question", d.new_question}};
                 },
                 [](const ScaleRulePolicy& d) { return json{{"kind", "scale_rule_policy"}, {"order", d.order}}; }},
      directive);
}

json to_json(const Catalogue& catalogue) {
  json criteria = json::array();
  for (const auto& c : catalogue.criteria) criteria.push_back(to_json(c));
  json provenance = json::array();
  for (const auto& d : catalogue.provenance) provenance.push_back(to_json(d));
  return json{{"format_version", kFormatVersion},
              {"id", catalogue.id},
              {"layer", catalogue.layer},
              {"title", catalogue.title},
              {"domain_label", catalogue.domain_label},
              {"context_label", catalogue.context_label},
              {"criteria", std::move(criteria)},
              {"provenance", std::move(provenance)},
              {"version", catalogue.version}};
}

json to_json(const DerivationScript& script) {
  json directives = json::array();
  for (const auto& d : script.directives) directives.push_back(to_json(d));
  return json{{"format_version", kFormatVersion}, {"target_layer", script.target_layer}, {"directives", directives}};
}

json to_json(const AnswerValue& answer) {
  return std::visit(Overloaded{[](const BooleanAnswer& a) { return json{{"kind", "boolean"}, {"value", a.value}}; },
                               [](const LikertAnswer& a) { return json{{"kind", "likert"}, {"value", a.value}}; },
                               [](const NumericAnswer& a) {
                                 return json{{"kind", "numeric"}, {"value", a.raw}, {"unit", a.unit}};
                               }},
                    answer);
}

json to_json(const SolutionProfile& profile) {
  json answers = json::object();
  for (const auto& [idx, answer] : profile.answers) answers[idx.str()] = to_json(answer);
  return json{{"format_version", kFormatVersion},
              {"name", profile.name},
              {"vendor", profile.vendor},
              {"answers", std::move(answers)},
              {"notes", profile.notes}};
}

namespace {

json result_to_json(const RankedResult& r) {
  json per_criterion = json::array();
  for (const auto& pc : r.result.per_criterion)
    per_criterion.push_back(json{{"index", pc.index.str()}, {"contribution", pc.contribution}});
  json per_category = json::object();
  for (const auto& [category, value] : r.result.per_category) per_category[category] = value;
  return json{{"position", r.position},
              {"tie", r.tie},
              {"solution", r.result.solution},
              {"ms", r.result.ms},
              {"ms_max", r.result.ms_max},
              {"ms_fraction", r.result.ms_fraction},
              {"per_criterion", std::move(per_criterion)},
              {"per_category", std::move(per_category)},
              {"failed_showstoppers", indices_to_json(r.result.failed_showstoppers)}};
}

json report_body(const ComparisonReport& report) {
  json cohort = json::array();
  for (const auto& r : report.cohort) cohort.push_back(result_to_json(r));
  json disqualified = json::array();
  for (const auto& d : report.disqualified)
    disqualified.push_back(json{{"solution", d.solution}, {"failed_showstoppers", indices_to_json(d.failed_showstoppers)}});
  return json{{"catalogue_id", report.catalogue_id},
              {"catalogue_version", report.catalogue_version},
              {"cohort", std::move(cohort)},
              {"disqualified", std::move(disqualified)}};
}

}  // namespace

json to_json(const ComparisonReport& report) {
  json j = report_body(report);
  j["format_version"] = kFormatVersion;
  return j;
}

json to_json(const WhatIfResult& result) {
  json changes = json::array();
  for (const auto& c : result.rank_changes)
    changes.push_back(
        json{{"solution", c.solution}, {"before_position", c.before_position}, {"after_position", c.after_position}});
  return json{{"format_version", kFormatVersion},
              {"before", report_body(result.before)},
              {"after", report_body(result.after)},
              {"rank_changes", std::move(changes)}};
}

json to_json(const ValidationReport& report) {
  json arr = json::array();
  for (const auto& v : report.violations)
    arr.push_back(json{{"index", v.index ? json(v.index->str()) : json(nullptr)}, {"rule", v.rule}, {"message", v.message}});
  return json{{"ok", report.ok()}, {"violations", std::move(arr)}};
}

json to_json(const CatalogueStats& stats) {
  return json{{"n_total", stats.n_total},
              {"n_numeric", stats.n_numeric},
              {"n_boolean", stats.n_boolean},
              {"n_likert", stats.n_likert}};
}

json to_json(const Perturbation& perturbation) {
  return std::visit(
      Overloaded{[](const SetRating& p) { return json{{"kind", "set_rating"}, {"index", p.index.str()}, {"rating", p.rating}}; },
                 [](const ToggleShowstopper& p) { return json{{"kind", "toggle_showstopper"}, {"index", p.index.str()}}; },
                 [](const OverrideAnswer& p) {
                   return json{{"kind", "override_answer"},
                               {"solution", p.solution},
                               {"index", p.index.str()},
                               {"answer", to_json(p.answer)}};
                 }},
      perturbation);
}

// ---------------------------------------------------------------------------
// from_json
// ---------------------------------------------------------------------------

Directive directive_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind")) malformed(path, "directive needs a 'kind'");
  const auto kind = get_string(j, "kind", path);
  if (kind == "remove") {
    expect_object(j, path, {"kind", "index", "justification"});
    return RemoveDirective{get_index(j, "index", path), get_string(j, "justification", path)};
  }
  if (kind == "reword") {
    expect_object(j, path, {"kind", "index", "new_question", "new_answer_kind", "justification"});
    RewordDirective d{get_index(j, "index", path), get_string(j, "new_question", path), std::nullopt,
                      get_string(j, "justification", path)};
    if (!j.at("new_answer_kind").is_null())
      d.new_answer_kind = answer_kind_from_json(j.at("new_answer_kind"), path + "/new_answer_kind");
    return d;
  }
  if (kind == "rate") {
    expect_object(j, path, {"kind", "index", "rating", "justification"});
    return RateDirective{get_index(j, "index", path), static_cast<int>(get_int(j, "rating", path)),
                         get_opt_string(j, "justification", path)};
  }
  if (kind == "mark_showstopper") {
    expect_object(j, path, {"kind", "index", "flag"});
    return MarkShowstopperDirective{get_index(j, "index", path), get_bool(j, "flag", path)};
  }
  if (kind == "define_intervals") {
    expect_object(j, path, {"kind", "index", "bins", "illustrative"});
    return DefineIntervalsDirective{get_index(j, "index", path), bins_from_json(j.at("bins"), path + "/bins"),
                                    get_bool(j, "illustrative", path)};
  }
  if (kind == "reword_for_scale") {
    expect_object(j, path, {"kind", "index", "new_question"});
    return RewordForScaleDirective{get_index(j, "index", path), get_string(j, "new_question", path)};
  }
  if (kind == "scale_rule_policy") {
    expect_object(j, path, {"kind", "order"});
    const auto& order = get_array(j, "order", path);
    ScaleRulePolicy policy;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (!order[i].is_string()) malformed(path + "/order/" + std::to_string(i), "expected a string");
      policy.order.push_back(order[i].get<std::string>());
    }
    return policy;
  }
  malformed(path + "/kind", "unknown directive kind '" + kind + "'");
}

Catalogue catalogue_from_json(const json& j) {
  check_format_version(j, "");
  expect_object(j, "", {"format_version", "id", "layer", "title", "domain_label", "context_label", "criteria",
                        "provenance", "version"});
  Catalogue c;
  c.id = get_string(j, "id", "");
  c.layer = static_cast<int>(get_int(j, "layer", ""));
  c.title = get_string(j, "title", "");
  c.domain_label = get_string(j, "domain_label", "");
  c.context_label = get_string(j, "context_label", "");
  const auto version = get_int(j, "version", "");
  if (version < 0) malformed("/version", "version must be non-negative");
  c.version = static_cast<std::uint64_t>(version);

  const auto& criteria = get_array(j, "criteria", "");
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto p = "/criteria/" + std::to_string(i);
    const auto& cj = criteria[i];
    expect_object(cj, p, {"index", "category", "question", "original_question", "answer_kind", "rating",
                          "showstopper", "scale", "weight", "justification"});
    Criterion crit;
    crit.index = get_index(cj, "index", p);
    crit.category = get_string(cj, "category", p);
    crit.question = get_string(cj, "question", p);
    crit.original_question = get_string(cj, "original_question", p);
    crit.answer_kind = answer_kind_from_json(cj.at("answer_kind"), p + "/answer_kind");
    if (!cj.at("rating").is_null()) crit.rating = static_cast<int>(get_int(cj, "rating", p));
    if (!cj.at("showstopper").is_null()) crit.showstopper = get_bool(cj, "showstopper", p);
    if (!cj.at("scale").is_null()) crit.scale = scale_from_json(cj.at("scale"), p + "/scale");
    if (!cj.at("weight").is_null()) crit.weight = get_number(cj, "weight", p);
    crit.justification = get_opt_string(cj, "justification", p);
    c.criteria.push_back(std::move(crit));
  }
  const auto& provenance = get_array(j, "provenance", "");
  for (std::size_t i = 0; i < provenance.size(); ++i)
    c.provenance.push_back(directive_from_json(provenance[i], "/provenance/" + std::to_string(i)));
  return c;
}

DerivationScript script_from_json(const json& j) {
  check_format_version(j, "");
  expect_object(j, "", {"format_version", "target_layer", "directives"});
  DerivationScript script;
  script.target_layer = static_cast<int>(get_int(j, "target_layer", ""));
  const auto& directives = get_array(j, "directives", "");
  for (std::size_t i = 0; i < directives.size(); ++i)
    script.directives.push_back(directive_from_json(directives[i], "/directives/" + std::to_string(i)));
  return script;
}

AnswerValue answer_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind")) malformed(path, "answer needs a 'kind'");
  const auto kind = get_string(j, "kind", path);
  if (kind == "boolean") {
    expect_object(j, path, {"kind", "value"});
    const auto& v = j.at("value");
    if (v.is_boolean()) return BooleanAnswer{v.get<bool>() ? 1 : 0};
    const auto value = get_int(j, "value", path);
    if (value != 0 && value != 1) malformed(path + "/value", "boolean answer must be 0 or 1");
    return BooleanAnswer{static_cast<int>(value)};
  }
  if (kind == "likert") {
    expect_object(j, path, {"kind", "value"});
    const auto value = get_int(j, "value", path);
    if (value < 1 || value > 5) malformed(path + "/value", "likert answer must be within 1..5");
    return LikertAnswer{static_cast<int>(value)};
  }
  if (kind == "numeric") {
    expect_object(j, path, {"kind", "value", "unit"});
    return NumericAnswer{get_number(j, "value", path), get_string(j, "unit", path)};
  }
  malformed(path + "/kind", "unknown answer kind '" + kind + "'");
}

SolutionProfile profile_from_json(const json& j) {
  check_format_version(j, "");
  expect_object(j, "", {"format_version", "name", "vendor", "answers", "notes"});
  SolutionProfile profile;
  profile.name = get_string(j, "name", "");
  profile.vendor = get_string(j, "vendor", "");
  profile.notes = get_string(j, "notes", "");
  const auto& answers = j.at("answers");
  if (!answers.is_object()) malformed("/answers", "expected an object keyed by criterion index");
  for (auto it = answers.begin(); it != answers.end(); ++it) {
    const auto p = "/answers/" + it.key();
    profile.answers[parse_index_text(it.key(), p)] = answer_from_json(it.value(), p);
  }
  return profile;
}

namespace {

ComparisonReport report_body_from_json(const json& j, const std::string& path) {
  ComparisonReport report;
  report.catalogue_id = get_string(j, "catalogue_id", path);
  report.catalogue_version = static_cast<std::uint64_t>(get_int(j, "catalogue_version", path));
  const auto& cohort = get_array(j, "cohort", path);
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const auto p = path + "/cohort/" + std::to_string(i);
    const auto& rj = cohort[i];
    expect_object(rj, p, {"position", "tie", "solution", "ms", "ms_max", "ms_fraction", "per_criterion",
                          "per_category", "failed_showstoppers"});
    RankedResult r;
    r.position = static_cast<std::size_t>(get_int(rj, "position", p));
    r.tie = get_bool(rj, "tie", p);
    r.result.solution = get_string(rj, "solution", p);
    r.result.ms = get_number(rj, "ms", p);
    r.result.ms_max = get_number(rj, "ms_max", p);
    r.result.ms_fraction = get_number(rj, "ms_fraction", p);
    const auto& pcs = get_array(rj, "per_criterion", p);
    for (std::size_t k = 0; k < pcs.size(); ++k) {
      const auto pp = p + "/per_criterion/" + std::to_string(k);
      expect_object(pcs[k], pp, {"index", "contribution"});
      r.result.per_criterion.push_back({get_index(pcs[k], "index", pp), get_number(pcs[k], "contribution", pp)});
    }
    const auto& cats = rj.at("per_category");
    if (!cats.is_object()) malformed(p + "/per_category", "expected an object");
    for (auto it = cats.begin(); it != cats.end(); ++it) {
      if (!it.value().is_number()) malformed(p + "/per_category/" + it.key(), "expected a number");
      r.result.per_category[it.key()] = it.value().get<double>();
    }
    r.result.failed_showstoppers = indices_from_json(rj.at("failed_showstoppers"), p + "/failed_showstoppers");
    report.cohort.push_back(std::move(r));
  }
  const auto& disq = get_array(j, "disqualified", path);
  for (std::size_t i = 0; i < disq.size(); ++i) {
    const auto p = path + "/disqualified/" + std::to_string(i);
    expect_object(disq[i], p, {"solution", "failed_showstoppers"});
    report.disqualified.push_back(
        {get_string(disq[i], "solution", p), indices_from_json(disq[i].at("failed_showstoppers"), p + "/failed_showstoppers")});
  }
  return report;
}

}  // namespace

ComparisonReport report_from_json(const json& j) {
  check_format_version(j, "");
  expect_object(j, "", {"format_version", "catalogue_id", "catalogue_version", "cohort", "disqualified"});
  return report_body_from_json(j, "");
}

Perturbation perturbation_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind")) malformed(path, "perturbation needs a 'kind'");
  const auto kind = get_string(j, "kind", path);
  if (kind == "set_rating") {
    expect_object(j, path, {"kind", "index", "rating"});
    return SetRating{get_index(j, "index", path), static_cast<int>(get_int(j, "rating", path))};
  }
  if (kind == "toggle_showstopper") {
    expect_object(j, path, {"kind", "index"});
    return ToggleShowstopper{get_index(j, "index", path)};
  }
  if (kind == "override_answer") {
    expect_object(j, path, {"kind", "solution", "index", "answer"});
    return OverrideAnswer{get_string(j, "solution", path), get_index(j, "index", path),
                          answer_from_json(j.at("answer"), path + "/answer")};
  }
  malformed(path + "/kind", "unknown perturbation kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Text documents
// ---------------------------------------------------------------------------

json parse_json(std::string_view bytes) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(bytes, e.byte == 0 ? 0 : e.byte - 1);
    StoreError err(store_error::kMalformed, "malformed document at line " + std::to_string(line) + ", column " +
                                                std::to_string(column) + ": " + e.what());
    err.line = line;
    err.column = column;
    throw err;
  }
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

std::string serialize_catalogue(const Catalogue& catalogue) { return dump_canonical(to_json(catalogue)); }

Catalogue load_catalogue(std::string_view bytes) {
  Catalogue c = catalogue_from_json(parse_json(bytes));
  auto report = validate_catalogue(c);
  if (!report.ok()) {
    StoreError err(store_error::kValidationFailure,
                   "catalogue '" + c.id + "' fails layer-" + std::to_string(c.layer) + " validation:\n" +
                       report.to_string());
    err.report = std::move(report);
    throw err;
  }
  return c;
}

std::string serialize_script(const DerivationScript& script) { return dump_canonical(to_json(script)); }
DerivationScript load_script(std::string_view bytes) { return script_from_json(parse_json(bytes)); }

std::string serialize_profile(const SolutionProfile& profile) { return dump_canonical(to_json(profile)); }
SolutionProfile load_profile(std::string_view bytes) { return profile_from_json(parse_json(bytes)); }

ComparisonReport load_report(std::string_view bytes) { return report_from_json(parse_json(bytes)); }

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "structured") return ReportFormat::Structured;
  if (text == "table") return ReportFormat::Table;
  if (text == "markdown") return ReportFormat::Markdown;
  return std::nullopt;
}

std::string format_score(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  std::string text(buf);
  if (text.find('.') != std::string::npos) {
    while (text.back() == '0') text.pop_back();
    if (text.back() == '.') text.pop_back();
  }
  if (text == "-0") text = "0";
  return text;
}

namespace {

std::vector<std::vector<std::string>> report_rows(const ComparisonReport& report, DecimalMark mark) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : report.cohort) {
    std::string stoppers;
    for (const auto& idx : r.result.failed_showstoppers) {
      if (!stoppers.empty()) stoppers += ", ";
      stoppers += idx.str();
    }
    std::string note;
    if (r.tie) note = "tie";
    if (!r.result.failed_showstoppers.empty()) note += note.empty() ? "disqualified" : ", disqualified";
    rows.push_back({std::to_string(r.position), r.result.solution, format_score(r.result.ms),
                    format_score(r.result.ms_max), format_percent(r.result.ms_fraction, mark),
                    stoppers.empty() ? "-" : stoppers, note});
  }
  return rows;
}

const std::vector<std::string>& report_header() {
  static const std::vector<std::string> header{"Rank", "Solution", "MS", "MS max", "Fit", "Showstoppers", "Note"};
  return header;
}

std::size_t display_width(const std::string& s) {
  // UTF-8 code points; good enough for alignment of names.
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char ch) { return (ch & 0xC0) != 0x80; }));
}

std::string render_table(const ComparisonReport& report, DecimalMark mark) {
  auto rows = report_rows(report, mark);
  const auto& header = report_header();
  std::vector<std::size_t> widths(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) widths[c] = display_width(header[c]);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], display_width(row[c]));

  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out += cells[c];
      if (c + 1 < cells.size()) out += std::string(widths[c] - display_width(cells[c]) + 2, ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(header);
  for (const auto& row : rows) out += line(row);
  return out;
}

std::string render_markdown(const ComparisonReport& report, DecimalMark mark) {
  auto rows = report_rows(report, mark);
  auto line = [](const std::vector<std::string>& cells) {
    std::string out = "|";
    for (const auto& cell : cells) out += " " + cell + " |";
    return out + "\n";
  };
  std::string out = line(report_header());
  out += "|---:|:---|---:|---:|---:|:---|:---|\n";
  for (const auto& row : rows) out += line(row);
  return out;
}

std::string render(const ComparisonReport& report, ReportFormat format, DecimalMark mark) {
  return format == ReportFormat::Markdown ? render_markdown(report, mark) : render_table(report, mark);
}

}  // namespace

std::string save_report(const ComparisonReport& report, ReportFormat format, DecimalMark mark) {
  if (format == ReportFormat::Structured) return dump_canonical(to_json(report));
  return render(report, format, mark);
}

std::string save_whatif(const WhatIfResult& result, ReportFormat format, DecimalMark mark) {
  if (format == ReportFormat::Structured) return dump_canonical(to_json(result));
  const bool md = format == ReportFormat::Markdown;
  std::string out;
  out += md ? "### Before\n\n" : "Before:\n";
  out += render(result.before, format, mark);
  out += md ? "\n### After\n\n" : "\nAfter:\n";
  out += render(result.after, format, mark);
  out += md ? "\n### Rank changes\n\n" : "\nRank changes:\n";
  if (result.rank_changes.empty()) {
    out += md ? "no changes\n" : "  no changes\n";
  } else {
    for (const auto& c : result.rank_changes)
      out += (md ? "- " : "  ") + c.solution + ": " + std::to_string(c.before_position) + " -> " +
             std::to_string(c.after_position) + "\n";
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError(store_error::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError(store_error::kIo, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw StoreError(store_error::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw StoreError(store_error::kIo, "cannot replace " + path.string());
  }
}

}  // namespace critcat
