#include "critcat/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <iostream>
#include <optional>

#include "critcat/catalogue_store.hpp"
#include "critcat/layer_engine.hpp"
#include "critcat/scoring_engine.hpp"
#include "critcat/workbench_service.hpp"

namespace critcat {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  std::string format = "table";
  std::string locale = "comma";
  bool timestamps = false;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  GlobalFlags flags;

  ReportFormat format() const { return *parse_report_format(flags.format); }
  DecimalMark mark() const { return flags.locale == "period" ? DecimalMark::Period : DecimalMark::Comma; }

  void stamp() const {
    if (!flags.timestamps || format() == ReportFormat::Structured) return;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    out << "# generated " << buf << "\n";
  }
};

// Errors from reading a document are re-thrown prefixed with its path.
template <typename Fn>
auto from_file(const std::string& path, Fn&& load) {
  const std::string bytes = read_file(path);
  try {
    return load(bytes);
  } catch (const StoreError& e) {
    StoreError wrapped(e.code(), path + ": " + e.what());
    wrapped.line = e.line;
    wrapped.column = e.column;
    wrapped.report = e.report;
    throw wrapped;
  }
}

Catalogue parse_catalogue_file(const std::string& path) {
  return from_file(path, [](const std::string& b) { return catalogue_from_json(parse_json(b)); });
}

Catalogue load_catalogue_file(const std::string& path) {
  return from_file(path, [](const std::string& b) { return load_catalogue(b); });
}

std::vector<SolutionProfile> load_profiles(const std::vector<std::string>& paths) {
  std::vector<SolutionProfile> profiles;
  for (const auto& p : paths) profiles.push_back(from_file(p, [](const std::string& b) { return load_profile(b); }));
  return profiles;
}

CriterionIndex parse_index_arg(const std::string& text, const std::string& flag) {
  auto idx = CriterionIndex::parse(text);
  if (!idx) throw UsageError(flag + ": '" + text + "' is not a criterion index (expected major.minor)");
  return *idx;
}

int parse_int_arg(const std::string& text, const std::string& flag) {
  try {
    std::size_t used = 0;
    int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw UsageError(flag + ": '" + text + "' is not an integer");
  }
}

std::pair<std::string, std::string> split_at(const std::string& text, char sep, const std::string& flag,
                                             const std::string& expected) {
  auto pos = text.rfind(sep);
  if (pos == std::string::npos || pos == 0 || pos + 1 == text.size())
    throw UsageError(flag + ": '" + text + "' does not match " + expected);
  return {text.substr(0, pos), text.substr(pos + 1)};
}

AnswerValue parse_answer_for(const Criterion& criterion, const std::string& text, const std::string& flag) {
  const auto& scale = *criterion.scale;
  if (std::holds_alternative<BooleanScale>(scale)) {
    if (text == "1" || text == "true" || text == "yes") return BooleanAnswer{1};
    if (text == "0" || text == "false" || text == "no") return BooleanAnswer{0};
    throw UsageError(flag + ": " + criterion.index.str() + " is boolean; expected 0 or 1, got '" + text + "'");
  }
  if (std::holds_alternative<LikertScale>(scale)) {
    const int v = parse_int_arg(text, flag);
    if (v < 1 || v > 5) throw UsageError(flag + ": likert answer for " + criterion.index.str() + " must be 1..5");
    return LikertAnswer{v};
  }
  std::string unit;
  if (const auto* n = std::get_if<NumericScale>(&scale)) unit = n->unit;
  if (const auto* i = std::get_if<IntervalScale>(&scale)) unit = i->unit;
  try {
    std::size_t used = 0;
    double raw = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return NumericAnswer{raw, unit};
  } catch (const std::exception&) {
    throw UsageError(flag + ": '" + text + "' is not a number");
  }
}

void print_error(std::ostream& err, const Error& e) {
  const std::string what = e.what();
  err << "error [" << e.code() << "]: " << what << "\n";
  // issues already spelled out in the message are not repeated
  for (const auto& issue : e.issues()) {
    if (what.find(issue.message) != std::string::npos) continue;
    err << "  " << (issue.index ? issue.index->str() + ": " : std::string()) << issue.message << "\n";
  }
}

// ---------------------------------------------------------------------------

int cmd_fixtures(Context& ctx, const std::string& dir) {
  const auto& fixtures = load_fixtures();
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  const std::vector<std::pair<std::string, std::string>> files{
      {"general.json", serialize_catalogue(fixtures.general_catalogue)},
      {"maas_refine.json", serialize_script(fixtures.maas_refinement)},
      {"maas_weight.json", serialize_script(fixtures.maas_weighting)},
      {"maas_expected_layer3.json", serialize_catalogue(fixtures.maas_expected_layer3)},
  };
  for (const auto& [name, bytes] : files) {
    write_file_atomic(base / name, bytes);
    ctx.out << "wrote " << (base / name).string() << "\n";
  }
  return kExitOk;
}

int cmd_derive(Context& ctx, const std::string& source_path, const std::string& script_path,
               const std::string& output_path, const DerivationLabels& labels) {
  const Catalogue source = load_catalogue_file(source_path);
  if (source.layer == 3) throw UsageError(source_path + " is already a layer-3 catalogue; nothing to derive");
  const DerivationScript script = from_file(script_path, [](const std::string& b) { return load_script(b); });
  if (script.target_layer != source.layer + 1)
    throw UsageError(script_path + " targets layer " + std::to_string(script.target_layer) + " but " + source_path +
                     " is layer " + std::to_string(source.layer));

  const Catalogue derived = derive(source, script, labels);
  write_file_atomic(output_path, serialize_catalogue(derived));

  ctx.stamp();
  if (derived.layer == 2) {
    const auto removed = source.criteria.size() - derived.criteria.size();
    ctx.out << source.criteria.size() << " \xE2\x86\x92 " << derived.criteria.size() << " criteria (" << removed
            << " removed)\n";
  } else {
    const auto s = catalogue_stats(derived);
    ctx.out << "N=" << s.n_total << " (K=" << s.n_numeric << ", L=" << s.n_boolean << ", M=" << s.n_likert << ")\n";
  }
  return kExitOk;
}

int cmd_validate(Context& ctx, const std::string& path) {
  const Catalogue catalogue = parse_catalogue_file(path);
  const auto report = validate_catalogue(catalogue);
  if (ctx.format() == ReportFormat::Structured) {
    ctx.out << dump_canonical(to_json(report));
  } else if (report.ok()) {
    ctx.stamp();
    ctx.out << "valid: " << catalogue.id << " (layer " << catalogue.layer << ", " << catalogue.criteria.size()
            << " criteria)\n";
    if (catalogue.layer == 3) {
      const auto s = catalogue_stats(catalogue);
      ctx.out << "N=" << s.n_total << " (K=" << s.n_numeric << ", L=" << s.n_boolean << ", M=" << s.n_likert << ")\n";
    }
  } else {
    ctx.stamp();
    ctx.out << "invalid: " << catalogue.id << " (" << report.violations.size() << " violation(s))\n";
    ctx.out << report.to_string();
  }
  return report.ok() ? kExitOk : kExitFailure;
}

int cmd_compare(Context& ctx, const std::string& catalogue_path, const std::vector<std::string>& profile_paths) {
  const Catalogue catalogue = load_catalogue_file(catalogue_path);
  const auto profiles = load_profiles(profile_paths);
  const auto report = compare(catalogue, profiles);
  ctx.stamp();
  ctx.out << save_report(report, ctx.format(), ctx.mark());
  return kExitOk;
}

struct WhatIfFlags {
  std::vector<std::string> set_rating;
  std::vector<std::string> toggle;
  std::vector<std::string> override_answer;
};

int cmd_whatif(Context& ctx, const std::string& catalogue_path, const std::vector<std::string>& profile_paths,
               const WhatIfFlags& flags) {
  // Syntax first, so malformed flags are usage errors before any file is read.
  std::vector<Perturbation> catalogue_changes;
  for (const auto& text : flags.set_rating) {
    auto [index, rating] = split_at(text, '=', "--set-rating", "INDEX=RATING");
    catalogue_changes.push_back(SetRating{parse_index_arg(index, "--set-rating"), parse_int_arg(rating, "--set-rating")});
  }
  for (const auto& text : flags.toggle) catalogue_changes.push_back(ToggleShowstopper{parse_index_arg(text, "--toggle-showstopper")});
  struct RawOverride {
    std::string solution;
    CriterionIndex index;
    std::string value;
  };
  std::vector<RawOverride> overrides;
  for (const auto& text : flags.override_answer) {
    auto [target, value] = split_at(text, '=', "--override", "SOLUTION:INDEX=VALUE");
    auto [solution, index] = split_at(target, ':', "--override", "SOLUTION:INDEX=VALUE");
    overrides.push_back({solution, parse_index_arg(index, "--override"), value});
  }

  const Catalogue catalogue = load_catalogue_file(catalogue_path);
  const auto profiles = load_profiles(profile_paths);

  for (const auto& p : catalogue_changes) {
    const auto index = std::visit([](const auto& x) -> CriterionIndex {
      if constexpr (requires { x.index; }) return x.index;
      return {};
    }, p);
    if (!catalogue.find(index)) throw UsageError("unknown index " + index.str());
    if (const auto* s = std::get_if<SetRating>(&p); s && (s->rating < 1 || s->rating > 5))
      throw UsageError("--set-rating: rating " + std::to_string(s->rating) + " is outside 1..5");
  }
  for (const auto& o : overrides) {
    if (!catalogue.find(o.index)) throw UsageError("unknown index " + o.index.str());
    if (std::none_of(profiles.begin(), profiles.end(), [&](const SolutionProfile& s) { return s.name == o.solution; }))
      throw UsageError("--override: unknown solution '" + o.solution + "'");
  }

  const Catalogue perturbed = apply_catalogue_perturbations(catalogue, catalogue_changes);
  std::vector<Perturbation> all = catalogue_changes;
  for (const auto& o : overrides)
    all.push_back(OverrideAnswer{o.solution, o.index, parse_answer_for(*perturbed.find(o.index), o.value, "--override")});

  const auto result = whatif(catalogue, profiles, all);
  ctx.stamp();
  ctx.out << save_whatif(result, ctx.format(), ctx.mark());
  return kExitOk;
}

int cmd_serve(Context& ctx, const std::string& bind, int port, const std::string& data_dir, const std::string& origin) {
  Workbench::Options options;
  if (!data_dir.empty()) options.snapshot_dir = data_dir;
  Workbench workbench(options);
  WorkbenchServer server(workbench, {bind, port, origin});
  ctx.err << "critcat workbench listening on " << bind << ":" << port << "\n";
  if (!server.listen()) {
    ctx.err << "error: cannot listen on " << bind << ":" << port << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"critcat: derive weighted criteria catalogues and rank software solutions", "critcat"};
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx{out, err, {}};
  app.add_option("--format", ctx.flags.format, "Report format")
      ->check(CLI::IsMember({"structured", "table", "markdown"}));
  app.add_option("--locale", ctx.flags.locale, "Decimal mark for percentages")->check(CLI::IsMember({"comma", "period"}));
  app.add_flag("--timestamps", ctx.flags.timestamps, "Prefix human-readable output with a generation time");

  std::string fixtures_dir;
  auto* fixtures = app.add_subcommand("fixtures", "Write the embedded fixture documents to a directory");
  fixtures->add_option("dir", fixtures_dir, "Output directory")->required();

  std::string source, script, output;
  DerivationLabels labels;
  std::string label_id, label_title, label_domain, label_context;
  auto* derive_cmd = app.add_subcommand("derive", "Apply a derivation script to a catalogue");
  derive_cmd->add_option("source", source, "Layer-1 or layer-2 catalogue")->required();
  derive_cmd->add_option("script", script, "Derivation script")->required();
  derive_cmd->add_option("output", output, "Where to write the derived catalogue")->required();
  derive_cmd->add_option("--id", label_id, "Id of the derived catalogue");
  derive_cmd->add_option("--title", label_title, "Title of the derived catalogue");
  derive_cmd->add_option("--domain", label_domain, "Domain label of the derived catalogue");
  derive_cmd->add_option("--context", label_context, "Context label of the derived catalogue");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a catalogue against its layer's rules");
  validate_cmd->add_option("catalogue", validate_path, "Catalogue document")->required();

  std::string compare_catalogue;
  std::vector<std::string> compare_profiles;
  auto* compare_cmd = app.add_subcommand("compare", "Score and rank solution profiles");
  compare_cmd->add_option("catalogue", compare_catalogue, "Layer-3 catalogue")->required();
  compare_cmd->add_option("profiles", compare_profiles, "Solution profiles")->required();

  std::string whatif_catalogue;
  std::vector<std::string> whatif_profiles;
  WhatIfFlags whatif_flags;
  auto* whatif_cmd = app.add_subcommand("whatif", "Re-rank under hypothetical changes; writes nothing");
  whatif_cmd->add_option("catalogue", whatif_catalogue, "Layer-3 catalogue")->required();
  whatif_cmd->add_option("profiles", whatif_profiles, "Solution profiles")->required();
  whatif_cmd->add_option("--set-rating", whatif_flags.set_rating, "INDEX=RATING")->take_last()->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  whatif_cmd->add_option("--toggle-showstopper", whatif_flags.toggle, "INDEX")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  whatif_cmd->add_option("--override", whatif_flags.override_answer, "SOLUTION:INDEX=VALUE")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  std::string bind = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  std::string cors_origin = "*";
  auto* serve_cmd = app.add_subcommand("serve", "Run the workbench HTTP service");
  serve_cmd->add_option("--bind", bind, "Address to bind");
  serve_cmd->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--data-dir", data_dir, "Directory for write-through snapshots");
  serve_cmd->add_option("--cors-origin", cors_origin, "Allowed CORS origin");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (!label_id.empty()) labels.id = label_id;
  if (!label_title.empty()) labels.title = label_title;
  if (!label_domain.empty()) labels.domain_label = label_domain;
  if (!label_context.empty()) labels.context_label = label_context;

  try {
    if (fixtures->parsed()) return cmd_fixtures(ctx, fixtures_dir);
    if (derive_cmd->parsed()) return cmd_derive(ctx, source, script, output, labels);
    if (validate_cmd->parsed()) return cmd_validate(ctx, validate_path);
    if (compare_cmd->parsed()) return cmd_compare(ctx, compare_catalogue, compare_profiles);
    if (whatif_cmd->parsed()) return cmd_whatif(ctx, whatif_catalogue, whatif_profiles, whatif_flags);
    if (serve_cmd->parsed()) return cmd_serve(ctx, bind, port, data_dir, cors_origin);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const WrongLayerError& e) {
    print_error(err, e);
    return kExitFailure;
  } catch (const Error& e) {
    print_error(err, e);
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace critcat
