// The general software-criteria catalogue (62 questions) and the MaaS/SME
// worked example built from it: refinement script, weighting script and the
// published final list.

#include <map>

#include "critcat/catalogue_store.hpp"

namespace critcat {

namespace {

struct Row {
  const char* index;
  const char* category;
  const char* question;      // general wording
  const char* formulation;   // domain-specific wording; nullptr when removed
  const char* justification;
  int rating;                // 0 when removed
  const char* scale;         // published scale label
  bool showstopper;
};

constexpr const char* kUsability = "Usability";
constexpr const char* kDocs = "Documentation and support for different languages";
constexpr const char* kPerf = "Performance of the IT solution";
constexpr const char* kScal = "Scalability";
constexpr const char* kAgile = "Agility, flexibility, adaptability";
constexpr const char* kMature = "Maturity, reliability, fault tolerance";
constexpr const char* kSustain = "Sustainability";
constexpr const char* kSecurity = "Information security";

// clang-format off
const Row kRows[] = {
  {"1.1", "Functionality", "What added value does the IT solution bring to the business?",
   "What added value does the IT solution bring to the business?",
   "SMEs do not have the resources to experiment on a long-term basis (showstopper).", 5, "boolean", true},
  {"1.2", "Functionality", "What is the time to availability?",
   "How long does it take for compute resources, trained models, or predict requests to be available or processed?",
   "SMEs do not primarily use MaaS for time-critical applications.", 2, "intervals", false},
  {"2.1", kUsability, "Is the user interface intuitive?", "Is the user interface intuitive?",
   "Non-experts need intuitive UI.", 4, "likert", false},
  {"2.2", kUsability, "Does the dialog only show user information related to the completion of the work item?",
   "Does the dialog only show user information related to the completion of the work item?",
   "Non-experts are otherwise overwhelmed.", 3, "boolean", false},
  {"2.3", kUsability, "How helpful is contextual help?", "How helpful is contextual help?",
   "Non-experts need help.", 4, "likert", false},
  {"2.4", kUsability, "What is the training effort?", "How-time consuming is it to apply the first ML models?",
   "SMEs do not have the resources to experiment on a long-term basis.", 4, "likert", false},
  {"2.5", kUsability, "Is there support for recurring tasks (e.g. macros; in MaaS context: pipeline)?",
   "Can recurring ML flows be stored in pipelines and run repeatedly?",
   "Rare use of complex pipelines.", 1, "boolean", false},
  {"2.6", kUsability, "Are there undo-features?", "Are there undo-features?",
   "It is customary and user-friendly to have this option.", 1, "boolean", false},
  {"2.7", kUsability, "Self-description capability: How useful and instructive is feedback?",
   "Self-description capability: How useful and instructive is feedback?",
   "Non-experts need help.", 4, "likert", false},
  {"2.8", kUsability, "Self-description capability: Are there further inquiries for important operations?",
   "Self-description capability: Are there further inquiries for important operations?",
   "Non-experts are not as experienced as experts when it comes to serious decisions.", 3, "boolean", false},
  {"2.9", kUsability, "Is it possible to resume at the starting point after interruption?", nullptr,
   "In cloud context, it is typical for IT systems or services to run nearly perpetually.", 0, nullptr, false},
  {"2.10", kUsability, "Is it possible to recover last deleted objects?",
   "Can deleted workflows or ML models be restored?",
   "Rare use of complex pipelines.", 1, "boolean", false},
  {"2.11", kUsability,
   "Expectation conformity: Are the comprehension requirements of the dialog consistent with the user's knowledge?",
   "Expectation conformity: Are the comprehension requirements of the dialog consistent with the user's knowledge?",
   "Overchallenged users are likely to make mistakes.", 3, "boolean", false},
  {"2.12", kUsability, "Expectation conformity: Is vocabulary used the user is familiar with?",
   "Expectation conformity: Is vocabulary used the user is familiar with?",
   "Familiar vocabulary is user-friendly and reduces the risk of maloperation.", 3, "boolean", false},
  {"2.13", kUsability, "Conformity of expectations: Are dialogues for similar work tasks designed similarly?", nullptr,
   "In our opinion, helpful tooltips (2.3) provide better assistance.", 0, nullptr, false},
  {"2.14", kUsability, "Expectation conformity: Do system responses occur immediately?",
   "Expectation conformity: Do system responses occur immediately?",
   "This allows for immediate correction of incorrect user input.", 3, "boolean", false},
  {"2.15", kUsability, "Fault tolerance: How useful are display and explanations of input errors?",
   "Fault tolerance: How useful are display and explanations of input errors?",
   "Non-experts need help.", 4, "likert", false},
  {"2.16", kUsability, "Fault tolerance: Is input data checked for validity and confirmed before use?",
   "To what extent does the service check the incoming data for compatibility with the training phase?",
   "Non-experts need help.", 4, "likert", false},
  {"2.17", kUsability, "Customizability: Are settings adapted to specific needs and capabilities of the user?",
   "Is prior knowledge of machine learning adequately addressed?",
   "Typically, considered SMEs do not have multiple users with varying knowledge of machine learning.", 1, "boolean", false},
  {"2.18", kUsability,
   "Customizability: Is adaptation to language, knowledge, cultural peculiarities (e.g. key-binding), motoric skills "
   "and perceptual capacity of the user possible?", nullptr,
   "Machine learning is a field which is deeply penetrated by English language and conventions.", 0, nullptr, false},
  {"2.19", kUsability, "Customizability: Can output be presented individually?",
   "Can results be displayed differently, for example by different error measures?",
   "Too detailed for the beginner.", 2, "boolean", false},
  {"3.1", "Costs", "What are one-time vs. ongoing costs?", "What are one-time vs. ongoing costs?",
   "Generally, SMEs are cost-conscious. This not only applies to one-time costs but also to ongoing costs.", 4,
   "numeric", false},
  {"3.2", "Costs", "What is the total cost of ownership (TCO) for the IT solution?",
   "What is the total cost of ownership (TCO) for the IT solution?", "Limited budget.", 4, "numeric", false},
  {"3.3", "Costs", "What is the near-term vs. long-term Return of Investment?",
   "What is the near-term vs. long-term Return of Investment?",
   "Financial lean period due to limited reserves inappropriate.", 4, "intervals", false},
  {"4.1", kPerf, "Does the IT solution run at decent speed on standard local hardware?", nullptr,
   "No installation of software needed.", 0, nullptr, false},
  {"4.2", kPerf, "What is the handling time?", "How much time does the training of the models take?",
   "SMEs do not primarily use MaaS for time-critical applications.", 2, "intervals", false},
  {"4.3", kPerf, "Reliability: Does the system deliver correct results?",
   "How is ensured that the system learns the right thing?",
   "Non-experts otherwise overestimate the capabilities of the application.", 5, "likert", false},
  {"5.1", "Requirement of manpower and knowledge/ability",
   "Does the IT solution require a high level of manpower (including rare knowledge/skills)?", nullptr,
   "In MaaS context, users can decide on their own, how much manpower they want to put into the tool.", 0, nullptr,
   false},
  {"6.1", kScal,
   "Can the IT solution increase its output by adding additional resources (typically hardware) to handle the "
   "increased load?",
   "Can the service scale hardware sufficiently to create more powerful models or handle more predict calls?",
   "Data volume does not change dramatically in SMEs over time.", 2, "boolean", false},
  {"6.2", kScal, "Further development: Can the existing solution be further developed?",
   "Can trained models be refined manually?", "No ML experts available in SMEs.", 1, "boolean", false},
  {"6.3", kScal, "Testability: What is the effort required to test the modified software?", nullptr,
   "Updates and patches in cloud environment are backwards compatible and automatically installed on service side.",
   0, nullptr, false},
  {"7.1", kAgile,
   "Can the IT solution be easily and quickly adapted to new requirements (e.g. without programming)?",
   "Can the IT solution be easily and quickly adapted to new requirements, such as more data points or attributes?",
   "Data type does not change dramatically in SMEs over time.", 2, "boolean", false},
  {"7.2", kAgile,
   "Modifiability: What is the effort to perform improvements, troubleshooting, or adapt to environmental changes?",
   nullptr,
   "Elimination of errors and improvements in cloud environment are automatically carried out on service side.", 0,
   nullptr, false},
  {"8.1", "Modularity", "Does the IT solution have a modular or monolithic architecture?", nullptr,
   "Users do not maintain or extend the product.", 0, nullptr, false},
  {"9.1", "Serviceability", "Is it easy to install, operate, maintain, and upgrade the IT solution?", nullptr,
   "Maintenance, upgrades and running are performed as a service by the cloud service.", 0, nullptr, false},
  {"10.1", "Portability", "Is it possible to transfer the software to another system environment?", nullptr,
   "MaaS tools are accessed through a web browser, hence no transfer of software is needed.", 0, nullptr, false},
  {"11.1", "Interfaces", "Does the IT solution offer open or proprietary interfaces to connect to other IT solutions?",
   "To what extent does the IT solution provide open or proprietary interfaces to read data or receive predict calls?",
   "Interfaces make the MaaS application user-friendly.", 4, "likert", false},
  {"11.2", "Interfaces", "Can machine learning models be exported?", "Can machine learning models be exported?",
   "No ML experts available in SMEs that maintain models locally.", 1, "boolean", false},
  {"12.1", "Interoperability",
   "Can the IT solution work easily smoothly with other IT solutions (e.g. through standard interfaces and data "
   "models)?",
   "Can the IT solution work easily smoothly with other IT solutions (e.g. through standard interfaces and data "
   "models)?",
   "Own interface development is too complex.", 4, "likert", false},
  {"13.1", "Multi-client capability",
   "Does the IT solution offer the ability to set up multiple clients (such as company codes) that can run "
   "independently?",
   "Is it possible to create multiple parallel ML workflows and/or train models independently of each other at the "
   "same time?",
   "No ML experts available in SMEs.", 1, "boolean", false},
  {"14.1", "Cloud capability",
   "Can the IT solution be operated as a private or public cloud solution (Software as a Service, Platform as a "
   "Service)?",
   nullptr, "Obviously, we consider only cloud services.", 0, nullptr, false},
  {"15.1", kMature,
   "How mature, reliable, or fault-tolerant is the IT solution (e.g. restart without data loss after failure)?",
   "How mature, reliable, or fault-tolerant is the IT solution (e.g. restart without data loss after failure)?",
   "No resources to deal with ever-changing platform conditions.", 5, "likert", false},
  {"15.2", kMature, "How proven is the software in the short-term vs in the long term?", nullptr,
   "MaaS solutions are in continuous change and brisk adoption by practitioners was not long ago.", 0, nullptr,
   false},
  {"16.1", kSustain,
   "Will the IT solution be further developed and supported by the IT solution provider in the medium to long term?",
   "Are new ML features like new model types added?", "Standard procedures are sufficient.", 1, "boolean", false},
  {"16.2", kSustain, "How frequency are there updates?", "To what extent is support provided?",
   "Support cannot be provided independently.", 4, "likert", false},
  {"16.3", kSustain, "Are new features or bug fixes implemented?", "Are new features or bug fixes implemented?",
   "Standard procedures are sufficient.", 1, "boolean", false},
  {"17.1", "Compliance with enterprise IT architecture",
   "Does the IT solution meet the standards set by your organization's enterprise IT architecture?", nullptr,
   "The service is performed in an environment outside the company.", 0, nullptr, false},
  {"18.1", "Compliance with laws and regulations",
   "Does the IT solution meet all relevant legal and regulatory requirements (e.g. principles of sound accounting)?",
   "Does the IT solution meet all relevant legal and regulatory requirements (e.g. principles of sound accounting)?",
   "Applies to any company (showstopper).", 5, "boolean", true},
  {"19.1", "IT governance", "Does the IT solution adequately support IT governance requirements?",
   "Does the IT solution adequately support IT governance?", "Even SMEs need basic IT governance aspects.", 2,
   "boolean", false},
  {"20.1", kSecurity,
   "Does the IT solution's information security architecture provide adequate protection against information "
   "security threats?",
   "Does the IT solution's information security architecture provide adequate protection against information "
   "security threats?",
   "Applies to any company (showstopper).", 5, "boolean", true},
  {"20.2", kSecurity,
   "Analysability: What is the effort required to diagnose defects or causes of failure or to determine parts in "
   "need of change?",
   nullptr, "Troubleshooting and maintenance are performed as a service by the cloud service.", 0, nullptr, false},
  {"20.3", kSecurity, "Are there versioning features and historical views of the data?",
   "Are there versioning features and historical views of the data?", "Standard settings are sufficient.", 1,
   "boolean", false},
  {"21.1", "Data privacy",
   "Does the IT solution adequately protect corporate data (personal data, customer data, intellectual property)?",
   "Does the IT solution adequately protect corporate data (personal data, customer data, intellectual property)?",
   "Applies to any company (showstopper).", 5, "boolean", true},
  {"22.1", kDocs,
   "How good is the documentation of the IT solution for users and operators? In which languages is the "
   "documentation available?",
   "How good is the documentation of the IT solution for users and operators? In which languages is the "
   "documentation available?",
   "Non-expert needs good documentation.", 4, "likert", false},
  {"22.2", kDocs, "Is there a programmer documentation (description of source code)?", nullptr,
   "The majority of MaaS providers are private businesses operating with a view to gain, thus keeping source code "
   "private.",
   0, nullptr, false},
  {"22.3", kDocs,
   "Method documentation: Are mathematical algorithms, technical-scientific or commercial methods properly "
   "described?",
   "How well are the methods used (e.g. cross-validation) and AI algorithms or their results described and "
   "explained?",
   "Non-expert needs help.", 4, "likert", false},
  {"22.4", kDocs,
   "Is required hardware, software, possible operating systems, standard libraries or runtime systems, "
   "installation, updates and deinstallation properly described?",
   nullptr, "No installation needed since this is performed as a service by the cloud service.", 0, nullptr, false},
  {"22.5", kDocs,
   "Is there a data documentation (formats, data types, restrictions, import and export interfaces)?",
   "Is there a data documentation (formats, data types, restrictions, import and export interfaces)?",
   "Non-expert needs help.", 4, "likert", false},
  {"22.6", kDocs, "Is there a test documentation?", nullptr,
   "Users generally are not concerned with software tests.", 0, nullptr, false},
  {"22.7", kDocs, "Is there a development documentation?", nullptr,
   "Users generally are not integrated in the development process.", 0, nullptr, false},
  {"23.1", "Innovative character", "How common is the solution in the market?",
   "How common is the solution in the market?",
   "Users could get help in online communities if solution is widely used in market.", 3, "likert", false},
  {"24.1", "Manufacturer dependency", "Does using the solution make you tied to a single manufacturer?",
   "Does using the solution make you tied to a single manufacturer?",
   "Changing the platform at your own request unlikely.", 3, "boolean", false},
};
// clang-format on

/// Layer-1 questions that ask for a numeric value.
const std::map<std::string, NumericQuantity>& numeric_questions() {
  static const std::map<std::string, NumericQuantity> kinds{
      {"1.2", {"minutes", Polarity::Cost}},
      {"3.1", {"EUR", Polarity::Cost}},
      {"3.2", {"EUR", Polarity::Cost}},
      {"3.3", {"percent", Polarity::Benefit}},
      {"4.2", {"minutes", Polarity::Cost}},
      {"16.2", {"updates per year", Polarity::Benefit}},
  };
  return kinds;
}

/// Placeholder bins for the published "intervals" criteria. Edges are not part
/// of the source material and are marked illustrative.
const std::map<std::string, std::vector<IntervalBin>>& illustrative_bins() {
  static const std::map<std::string, std::vector<IntervalBin>> bins{
      {"1.2", {{"more than an hour", 60, 1440}, {"5 to 60 minutes", 5, 60}, {"under 5 minutes", 0, 5}}},
      {"3.3", {{"negative", -100, 0}, {"0 to 20 percent", 0, 20}, {"above 20 percent", 20, 1000}}},
      {"4.2", {{"more than 4 hours", 240, 10080}, {"30 minutes to 4 hours", 30, 240}, {"under 30 minutes", 0, 30}}},
  };
  return bins;
}

CriterionIndex idx(const char* text) { return *CriterionIndex::parse(text); }

AnswerKind layer1_kind(const Row& row) {
  const auto& kinds = numeric_questions();
  auto it = kinds.find(row.index);
  if (it == kinds.end()) return Qualitative{};
  return it->second;
}

ScaleSpec published_scale(const Row& row) {
  const std::string label = row.scale;
  if (label == "boolean") return BooleanScale{};
  if (label == "likert") return LikertScale{};
  const auto kind = std::get<NumericQuantity>(layer1_kind(row));
  if (label == "numeric") return NumericScale{kind.unit, kind.polarity};
  return IntervalScale{kind.unit, illustrative_bins().at(row.index), true};
}

FixtureSet build_fixtures() {
  FixtureSet set;

  auto& general = set.general_catalogue;
  general.id = "general-software-criteria";
  general.layer = 1;
  general.title = "General criteria for software solutions";
  general.domain_label = "general";
  general.context_label = "any";
  general.version = 1;
  for (const auto& row : kRows) {
    Criterion c;
    c.index = idx(row.index);
    c.category = row.category;
    c.question = row.question;
    c.original_question = row.question;
    c.answer_kind = layer1_kind(row);
    general.criteria.push_back(std::move(c));
  }

  set.maas_refinement.target_layer = 2;
  for (const auto& row : kRows) {
    if (!row.formulation) {
      set.maas_refinement.directives.push_back(RemoveDirective{idx(row.index), row.justification});
      continue;
    }
    const bool kind_changes = is_numeric(layer1_kind(row)) && std::string(row.scale) != "numeric" &&
                              std::string(row.scale) != "intervals";
    if (std::string(row.formulation) != row.question || kind_changes) {
      RewordDirective d{idx(row.index), row.formulation, std::nullopt, ""};
      if (kind_changes) d.new_answer_kind = Qualitative{};
      set.maas_refinement.directives.push_back(std::move(d));
    }
  }

  set.maas_weighting.target_layer = 3;
  for (const auto& row : kRows) {
    if (!row.formulation) continue;
    set.maas_weighting.directives.push_back(RateDirective{idx(row.index), row.rating, std::string(row.justification)});
  }
  for (const auto& row : kRows) {
    if (row.showstopper) set.maas_weighting.directives.push_back(MarkShowstopperDirective{idx(row.index), true});
  }
  for (const auto& [index, bins] : illustrative_bins())
    set.maas_weighting.directives.push_back(DefineIntervalsDirective{idx(index.c_str()), bins, true});

  // The published final list, built from the table columns directly.
  auto& expected = set.maas_expected_layer3;
  const auto labels = maas_layer3_labels();
  expected.id = *labels.id;
  expected.layer = 3;
  expected.title = *labels.title;
  expected.domain_label = *labels.domain_label;
  expected.context_label = *labels.context_label;
  expected.version = 1;
  int rating_total = 0;
  for (const auto& row : kRows) rating_total += row.rating;
  for (const auto& row : kRows) {
    if (!row.formulation) continue;
    Criterion c;
    c.index = idx(row.index);
    c.category = row.category;
    c.question = row.formulation;
    c.original_question = row.question;
    c.answer_kind = std::string(row.scale) == "numeric" || std::string(row.scale) == "intervals"
                        ? layer1_kind(row)
                        : AnswerKind{Qualitative{}};
    c.rating = row.rating;
    c.showstopper = row.showstopper;
    c.scale = published_scale(row);
    c.weight = static_cast<double>(row.rating) / static_cast<double>(rating_total);
    c.justification = row.justification;
    expected.criteria.push_back(std::move(c));
  }
  expected.provenance.push_back(engine_scale_policy());
  for (const auto& d : set.maas_weighting.directives) expected.provenance.push_back(d);
  return set;
}

}  // namespace

DerivationLabels maas_layer2_labels() {
  return {"maas-sme-l2", "Machine-Learning-as-a-Service criteria", "MaaS", "any"};
}

DerivationLabels maas_layer3_labels() {
  return {"maas-sme-l3", "Machine-Learning-as-a-Service criteria for SMEs", "MaaS", "SME"};
}

const std::vector<CriterionIndex>& documented_scale_exceptions() {
  static const std::vector<CriterionIndex> exceptions{{23, 1}};
  return exceptions;
}

const FixtureSet& load_fixtures() {
  static const FixtureSet fixtures = build_fixtures();
  return fixtures;
}

}  // namespace critcat
