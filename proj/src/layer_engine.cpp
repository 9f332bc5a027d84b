#include "critcat/layer_engine.hpp"

#include <map>
#include <numeric>
#include <set>

#include "overloaded.hpp"

namespace critcat {

using detail::Overloaded;

namespace {

std::string summarize(const std::vector<Issue>& issues) {
  std::string text = "derivation failed with " + std::to_string(issues.size()) + " issue(s)";
  for (const auto& issue : issues) {
    text += "\n  [" + issue.code + "]";
    if (issue.index) text += " " + issue.index->str();
    text += ": " + issue.message;
  }
  return text;
}

Issue make_issue(std::string_view code, std::optional<CriterionIndex> index, std::string message) {
  return Issue{std::string(code), index, std::move(message)};
}

Catalogue derived_header(const Catalogue& source, int layer, const DerivationLabels& labels) {
  Catalogue out;
  out.id = labels.id.value_or(source.id + "-l" + std::to_string(layer));
  out.layer = layer;
  out.title = labels.title.value_or(source.title);
  out.domain_label = labels.domain_label.value_or(source.domain_label);
  out.context_label = labels.context_label.value_or(source.context_label);
  out.version = 1;
  return out;
}

}  // namespace

DerivationError::DerivationError(std::vector<Issue> issues)
    : Error(issues.empty() ? "derivation-failed" : issues.front().code, summarize(issues), issues) {}

const ScaleRulePolicy& engine_scale_policy() {
  static const ScaleRulePolicy policy{{"showstopper:boolean", "numeric-kind:numeric-or-intervals",
                                       "rating-4-5:likert", "rating-1-3:boolean"}};
  return policy;
}

ScaleSpec assign_scale(int rating, bool showstopper, const AnswerKind& answer_kind,
                       const std::optional<IntervalScale>& bins) {
  if (showstopper) return BooleanScale{};
  if (const auto* numeric = std::get_if<NumericQuantity>(&answer_kind)) {
    if (bins) {
      IntervalScale scale = *bins;
      scale.unit = numeric->unit;
      return scale;
    }
    return NumericScale{numeric->unit, numeric->polarity};
  }
  if (rating >= 4) return LikertScale{};
  return BooleanScale{};
}

std::vector<double> normalize_weights(std::span<const int> ratings) {
  if (ratings.empty())
    throw DerivationError({make_issue(derive_error::kEmptyList, std::nullopt, "no ratings to normalise")});
  std::vector<Issue> issues;
  long total = 0;
  for (int r : ratings) {
    if (r < 1 || r > 5)
      issues.push_back(make_issue(derive_error::kInvalidRating, std::nullopt,
                                  "rating " + std::to_string(r) + " is outside 1..5"));
    total += r;
  }
  if (!issues.empty()) throw DerivationError(std::move(issues));
  std::vector<double> weights;
  weights.reserve(ratings.size());
  for (int r : ratings) weights.push_back(static_cast<double>(r) / static_cast<double>(total));
  return weights;
}

std::vector<Issue> check_directive_indices(const Catalogue& source,
                                           std::span<const Directive> directives) {
  std::vector<Issue> issues;
  for (const auto& d : directives) {
    auto idx = directive_index(d);
    if (idx && !source.find(*idx))
      issues.push_back(make_issue(derive_error::kUnknownIndex, idx,
                                  "unknown index " + idx->str() + " in " +
                                      std::string(directive_kind(d)) + " directive"));
  }
  return issues;
}

Catalogue derive_layer2(const Catalogue& layer1, const DerivationScript& script,
                        const DerivationLabels& labels) {
  if (layer1.layer != 1) throw WrongLayerError(1, layer1.layer);
  if (script.target_layer != 2)
    throw DerivationError({make_issue(derive_error::kWrongTarget, std::nullopt,
                                      "script targets layer " + std::to_string(script.target_layer) +
                                          ", expected 2")});

  std::vector<Issue> issues;
  std::set<CriterionIndex> removed;
  std::map<CriterionIndex, Criterion> working;
  for (const auto& c : layer1.criteria) working.emplace(c.index, c);

  for (const auto& directive : script.directives) {
    if (!is_refinement(directive)) {
      issues.push_back(make_issue(derive_error::kDirectiveNotAllowed, directive_index(directive),
                                  std::string(directive_kind(directive)) +
                                      " is not a refinement directive"));
      continue;
    }
    const CriterionIndex idx = *directive_index(directive);
    auto it = working.find(idx);
    if (it == working.end()) {
      issues.push_back(make_issue(derive_error::kUnknownIndex, idx, "unknown index " + idx.str()));
      continue;
    }
    if (removed.count(idx)) {
      issues.push_back(make_issue(derive_error::kDirectiveAfterRemoval, idx,
                                  std::string(directive_kind(directive)) + " after removal of " + idx.str()));
      continue;
    }
    std::visit(Overloaded{[&](const RemoveDirective& d) {
                            if (d.justification.empty())
                              issues.push_back(make_issue(derive_error::kEmptyText, idx,
                                                          "removal of " + idx.str() + " needs a justification"));
                            removed.insert(idx);
                          },
                          [&](const RewordDirective& d) {
                            if (d.new_question.empty()) {
                              issues.push_back(make_issue(derive_error::kEmptyText, idx,
                                                          "reword of " + idx.str() + " has an empty question"));
                              return;
                            }
                            it->second.question = d.new_question;
                            if (d.new_answer_kind) it->second.answer_kind = *d.new_answer_kind;
                          },
                          [](const auto&) {}},
               directive);
  }
  if (!issues.empty()) throw DerivationError(std::move(issues));

  Catalogue out = derived_header(layer1, 2, labels);
  for (const auto& c : layer1.criteria) {
    if (removed.count(c.index)) continue;
    out.criteria.push_back(working.at(c.index));
  }
  out.provenance = script.directives;
  return out;
}

Catalogue derive_layer3(const Catalogue& layer2, const DerivationScript& script,
                        const DerivationLabels& labels) {
  if (layer2.layer != 2) throw WrongLayerError(2, layer2.layer);
  if (script.target_layer != 3)
    throw DerivationError({make_issue(derive_error::kWrongTarget, std::nullopt,
                                      "script targets layer " + std::to_string(script.target_layer) +
                                          ", expected 3")});

  struct Pending {
    std::optional<RateDirective> rate;
    bool showstopper = false;
    std::optional<IntervalScale> bins;
    std::optional<std::string> question;
  };

  std::vector<Issue> issues;
  std::map<CriterionIndex, Pending> pending;
  std::vector<Directive> provenance{engine_scale_policy()};

  for (const auto& directive : script.directives) {
    if (const auto* policy = std::get_if<ScaleRulePolicy>(&directive)) {
      if (!(*policy == engine_scale_policy()))
        issues.push_back(make_issue(derive_error::kUnsupportedPolicy, std::nullopt,
                                    "script was recorded with a different scale-rule order"));
      continue;
    }
    if (!is_weighting(directive)) {
      issues.push_back(make_issue(derive_error::kDirectiveNotAllowed, directive_index(directive),
                                  std::string(directive_kind(directive)) +
                                      " is not a weighting directive"));
      continue;
    }
    provenance.push_back(directive);
    const CriterionIndex idx = *directive_index(directive);
    const Criterion* criterion = layer2.find(idx);
    if (!criterion) {
      issues.push_back(make_issue(derive_error::kUnknownIndex, idx, "unknown index " + idx.str()));
      continue;
    }
    auto& slot = pending[idx];
    std::visit(Overloaded{[&](const RateDirective& d) {
                            if (d.rating < 1 || d.rating > 5)
                              issues.push_back(make_issue(derive_error::kInvalidRating, idx,
                                                          "rating " + std::to_string(d.rating) +
                                                              " for " + idx.str() + " is outside 1..5"));
                            else if (slot.rate)
                              issues.push_back(make_issue(derive_error::kDuplicateRating, idx,
                                                          idx.str() + " is rated more than once"));
                            else
                              slot.rate = d;
                          },
                          [&](const MarkShowstopperDirective& d) { slot.showstopper = d.flag; },
                          [&](const DefineIntervalsDirective& d) {
                            if (!is_numeric(criterion->answer_kind)) {
                              issues.push_back(make_issue(derive_error::kBinsOnQualitative, idx,
                                                          "intervals defined on qualitative " + idx.str()));
                              return;
                            }
                            if (auto problem = check_interval_bins(d.bins); !problem.empty()) {
                              issues.push_back(make_issue(derive_error::kInvalidBins, idx, problem));
                              return;
                            }
                            slot.bins = IntervalScale{"", d.bins, d.illustrative};
                          },
                          [&](const RewordForScaleDirective& d) {
                            if (d.new_question.empty())
                              issues.push_back(make_issue(derive_error::kEmptyText, idx,
                                                          "reword of " + idx.str() + " has an empty question"));
                            else
                              slot.question = d.new_question;
                          },
                          [](const auto&) {}},
               directive);
  }

  for (const auto& c : layer2.criteria) {
    auto it = pending.find(c.index);
    if (it == pending.end() || !it->second.rate)
      issues.push_back(make_issue(derive_error::kMissingRating, c.index, c.index.str() + " has no rating"));
  }
  if (!issues.empty()) throw DerivationError(std::move(issues));

  std::vector<int> ratings;
  ratings.reserve(layer2.criteria.size());
  for (const auto& c : layer2.criteria) ratings.push_back(pending.at(c.index).rate->rating);
  const auto weights = normalize_weights(ratings);

  Catalogue out = derived_header(layer2, 3, labels);
  out.criteria.reserve(layer2.criteria.size());
  for (std::size_t i = 0; i < layer2.criteria.size(); ++i) {
    Criterion c = layer2.criteria[i];
    const auto& p = pending.at(c.index);
    if (p.question) c.question = *p.question;
    c.rating = p.rate->rating;
    c.showstopper = p.showstopper;
    c.scale = assign_scale(*c.rating, p.showstopper, c.answer_kind, p.bins);
    c.weight = weights[i];
    if (p.rate->justification) c.justification = p.rate->justification;
    out.criteria.push_back(std::move(c));
  }
  out.provenance = std::move(provenance);
  return out;
}

Catalogue derive(const Catalogue& source, const DerivationScript& script, const DerivationLabels& labels) {
  if (script.target_layer == 2) return derive_layer2(source, script, labels);
  if (script.target_layer == 3) return derive_layer3(source, script, labels);
  throw DerivationError({make_issue(derive_error::kWrongTarget, std::nullopt,
                                    "script targets unsupported layer " +
                                        std::to_string(script.target_layer))});
}

}  // namespace critcat
