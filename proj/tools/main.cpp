// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ruledeck/ast.hpp"
#include "ruledeck/config.hpp"
#include "ruledeck/corpus.hpp"
#include "ruledeck/diff.hpp"
#include "ruledeck/metrics.hpp"
#include "ruledeck/parser.hpp"
#include "ruledeck/registry.hpp"
#include "ruledeck/report.hpp"
#include "ruledeck/retrieval.hpp"
#include "ruledeck/train.hpp"

namespace {

using namespace ruledeck;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;   // ERROR diagnostics or bad input data
constexpr int kExitUsage = 2;   // flag misuse, missing files, malformed configs

// Distinguishes environment problems (exit 2) from data problems (exit 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::optional<std::string>& path, const std::string& content) {
  if (!path || *path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(*path);
  if (!out) throw UsageError("cannot write " + *path);
  out << content;
}

void print_diagnostics(const Diagnostics& diags) {
  for (const Diagnostic& diag : diags) std::cerr << to_string(diag) << "\n";
}

RunConfig resolve_config(const std::optional<std::string>& config_flag) {
  try {
    if (config_flag) return load_config(*config_flag);
    if (auto env_path = env_config_path()) return load_config(*env_path);
  } catch (const std::runtime_error& err) {
    throw UsageError(err.what());
  }
  return RunConfig{};
}

CommandRegistry resolve_registry(const RunConfig& config,
                                 const std::optional<std::string>& registry_flag) {
  try {
    if (registry_flag) return load_registry(*registry_flag);
    if (!config.registry_path.empty()) return load_registry(config.registry_path);
  } catch (const std::runtime_error& err) {
    throw UsageError(err.what());
  }
  return default_registry();
}

WeightProfile parse_weights_flag(const std::string& value) {
  WeightProfile profile;
  std::stringstream in(value);
  std::string part;
  std::vector<double> parts;
  while (std::getline(in, part, ',')) {
    try {
      parts.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw UsageError("--weights expects w1,w2,w3");
    }
  }
  if (parts.size() != 3) throw UsageError("--weights expects w1,w2,w3");
  profile.w1 = parts[0];
  profile.w2 = parts[1];
  profile.w3 = parts[2];
  if (!profile.valid())
    throw UsageError("--weights must lie in [0,1] and sum to 1");
  return profile;
}

SplitConfig parse_ratios_flag(const std::string& value, std::uint64_t seed) {
  SplitConfig config;
  config.seed = seed;
  std::stringstream in(value);
  std::string part;
  std::vector<double> parts;
  while (std::getline(in, part, ',')) {
    try {
      parts.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw UsageError("--ratios expects a,b,c");
    }
  }
  if (parts.size() != 3) throw UsageError("--ratios expects a,b,c");
  config.train_ratio = parts[0];
  config.val_ratio = parts[1];
  config.test_ratio = parts[2];
  if (!config.valid())
    throw UsageError("--ratios must lie in (0,1) and sum to 1");
  return config;
}

// {id, code} per line.
std::map<std::string, std::string> read_code_jsonl(const std::string& path,
                                                   std::vector<std::string>* order) {
  std::map<std::string, std::string> codes;
  std::stringstream in(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("id") ||
        !doc.contains("code") || !doc["id"].is_string() || !doc["code"].is_string())
      throw UsageError(path + ": line " + std::to_string(lineno) +
                       ": expected {id, code}");
    std::string id = doc["id"].get<std::string>();
    if (codes.count(id) > 0)
      throw UsageError(path + ": line " + std::to_string(lineno) + ": duplicate id " + id);
    codes[id] = doc["code"].get<std::string>();
    if (order != nullptr) order->push_back(std::move(id));
  }
  return codes;
}

int run_parse(const std::string& file, bool serialize, const RunConfig& config) {
  CommandRegistry registry = resolve_registry(config, std::nullopt);
  std::string source = read_file(file);
  ParseResult parsed = parse_deck(source, registry);
  print_diagnostics(parsed.diagnostics);
  if (serialize) {
    for (const RuleAst& ast : lower(*parsed.deck)) std::cout << ::ruledeck::serialize(ast) << "\n";
  } else {
    std::cout << "parsed " << parsed.deck->children.size() << " statement(s), "
              << count_errors(parsed.diagnostics) << " error(s)\n";
  }
  return count_errors(parsed.diagnostics) > 0 ? kExitError : kExitOk;
}

int run_validate(const std::string& file, const std::optional<std::string>& registry_flag,
                 bool strict, const RunConfig& config) {
  CommandRegistry registry = resolve_registry(config, registry_flag);
  std::string source = read_file(file);
  ValidationReport report = validate_generation(source, registry, strict || config.strict);
  print_diagnostics(report.diagnostics);
  std::cout << (report.well_formed ? "well-formed" : "malformed") << "\n";
  return report.well_formed ? kExitOk : kExitError;
}

int run_score(const std::string& candidates_path, const std::string& references_path,
              const std::optional<std::string>& weights_flag,
              const std::optional<std::string>& out_path, const RunConfig& config) {
  CommandRegistry registry = resolve_registry(config, std::nullopt);
  WeightProfile profile = weights_flag ? parse_weights_flag(*weights_flag) : config.profile;
  if (!profile.valid()) throw UsageError("weight profile must sum to 1");

  std::vector<std::string> reference_order;
  std::map<std::string, std::string> references =
      read_code_jsonl(references_path, &reference_order);
  std::map<std::string, std::string> candidates = read_code_jsonl(candidates_path, nullptr);

  std::vector<EvalPair> pairs;
  std::vector<std::string> missing;
  for (const std::string& id : reference_order) {
    auto it = candidates.find(id);
    if (it == candidates.end()) {
      missing.push_back("candidate " + id + " missing");
      continue;
    }
    pairs.push_back({id, it->second, references.at(id)});
  }
  MetricReport report = evaluate_corpus(pairs, profile, registry);
  report.errors.insert(report.errors.end(), missing.begin(), missing.end());
  write_output(out_path, metric_report_json(report) + "\n");
  return report.errors.empty() ? kExitOk : kExitError;
}

int run_classify(const std::string& in_path, const std::optional<std::string>& out_path,
                 const RunConfig& config) {
  CommandRegistry registry = resolve_registry(config, std::nullopt);
  std::vector<CorpusExample> corpus;
  try {
    corpus = read_corpus(in_path);
  } catch (const std::runtime_error& err) {
    throw UsageError(err.what());
  }
  for (CorpusExample& example : corpus)
    example.complexity = classify_complexity(example, registry);
  write_output(out_path, corpus_to_jsonl(corpus));
  return kExitOk;
}

int run_split(const std::string& in_path, const std::optional<std::string>& ratios_flag,
              std::uint64_t seed, const std::optional<std::string>& out_path,
              const RunConfig& config) {
  CommandRegistry registry = resolve_registry(config, std::nullopt);
  SplitConfig split_config =
      ratios_flag ? parse_ratios_flag(*ratios_flag, seed) : SplitConfig{};
  split_config.seed = seed;
  std::vector<CorpusExample> corpus;
  try {
    corpus = read_corpus(in_path);
  } catch (const std::runtime_error& err) {
    throw UsageError(err.what());
  }
  for (CorpusExample& example : corpus)
    if (!example.complexity) example.complexity = classify_complexity(example, registry);
  std::vector<CorpusExample> split = stratified_split(corpus, split_config);
  write_output(out_path, corpus_to_jsonl(split));
  return kExitOk;
}

int run_stats(const std::string& in_path, bool as_json) {
  std::vector<CorpusExample> corpus;
  try {
    corpus = read_corpus(in_path);
  } catch (const std::runtime_error& err) {
    throw UsageError(err.what());
  }
  DistributionStats stats = distribution_stats(corpus);
  std::cout << (as_json ? stats_json(stats) + "\n" : stats_table(stats));
  return kExitOk;
}

RetrievalIndex load_kb_index(const std::string& kb_path, const CommandRegistry& registry) {
  std::vector<KnowledgeEntry> entries;
  try {
    entries = read_kb(kb_path);
  } catch (const std::runtime_error& err) {
    throw UsageError(err.what());
  }
  return RetrievalIndex::build(std::move(entries), registry);
}

int run_retrieve(const std::string& kb_path, const std::string& query,
                 const std::optional<std::string>& context_path,
                 std::optional<std::size_t> k_flag, std::optional<double> alpha_flag,
                 const RunConfig& config) {
  CommandRegistry registry = resolve_registry(config, std::nullopt);
  RetrievalIndex index = load_kb_index(kb_path, registry);
  std::optional<std::string> context;
  if (context_path) context = read_file(*context_path);
  std::size_t k = k_flag ? *k_flag : config.k;
  double alpha = alpha_flag ? *alpha_flag : config.alpha;
  if (alpha < 0.0 || alpha > 1.0) throw UsageError("--alpha must lie in [0,1]");
  RetrievalResult result = retrieve(index, query, context, registry, k, alpha);
  for (const std::string& warning : result.warnings)
    std::cerr << "warning: " << warning << "\n";
  nlohmann::json doc = nlohmann::json::array();
  for (const RetrievalHit& hit : result.hits)
    doc.push_back({{"id", hit.id},
                   {"sem_score", hit.sem_score},
                   {"struct_score", hit.struct_score},
                   {"combined", hit.combined}});
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

int run_prompt(const std::string& kb_path, const std::string& query,
               std::optional<std::size_t> k_flag,
               const std::optional<std::string>& template_path, const RunConfig& config) {
  CommandRegistry registry = resolve_registry(config, std::nullopt);
  RetrievalIndex index = load_kb_index(kb_path, registry);
  RetrievalResult result = retrieve(index, query, std::nullopt, registry,
                                    k_flag ? *k_flag : config.k, config.alpha);
  std::optional<std::string> template_text;
  if (template_path) template_text = read_file(*template_path);
  std::cout << assemble_prompt(query, result.hits, index, template_text) << "\n";
  return kExitOk;
}

int run_weights(const std::string& in_path, const std::optional<std::string>& profile_path,
                const std::string& out_path, const RunConfig& config) {
  CommandRegistry registry = resolve_registry(config, std::nullopt);
  TokenClassWeights class_weights = config.class_weights;
  if (profile_path) {
    RunConfig profile_config;
    try {
      profile_config = load_config(*profile_path);
    } catch (const std::runtime_error& err) {
      throw UsageError(err.what());
    }
    class_weights = profile_config.class_weights;
  }
  std::string source = read_file(in_path);
  TokenWeightMap map = token_weights(source, class_weights, registry);
  write_output(out_path, token_weight_jsonl(map));
  return kExitOk;
}

int run_rescore(const std::string& candidates_path, double lambda, bool discard,
                bool strict, const RunConfig& config) {
  CommandRegistry registry = resolve_registry(config, std::nullopt);
  std::vector<ScoredCandidate> candidates;
  std::stringstream in(read_file(candidates_path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("code") ||
        !doc.contains("model_score") || !doc["code"].is_string() ||
        !doc["model_score"].is_number())
      throw UsageError(candidates_path + ": line " + std::to_string(lineno) +
                       ": expected {code, model_score}");
    candidates.push_back(
        {doc["code"].get<std::string>(), doc["model_score"].get<double>()});
  }
  RescoreOutcome outcome =
      rescore_candidates(candidates, lambda, registry, strict || config.strict, discard);
  for (const std::string& warning : outcome.warnings)
    std::cerr << "warning: " << warning << "\n";
  nlohmann::json doc = nlohmann::json::array();
  for (const RescoreResult& result : outcome.results) {
    nlohmann::json diags = nlohmann::json::array();
    for (const Diagnostic& diag : result.diagnostics) diags.push_back(to_string(diag));
    doc.push_back({{"code", result.candidate_code},
                   {"model_score", result.model_score},
                   {"penalty", result.penalty},
                   {"final_score", result.final_score},
                   {"diagnostics", diags}});
  }
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

int run_report(const std::vector<std::string>& metric_args,
               const std::optional<std::string>& baseline) {
  std::vector<ModelMetrics> models;
  for (const std::string& arg : metric_args) {
    std::size_t eq = arg.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= arg.size())
      throw UsageError("--metrics expects label=path, got '" + arg + "'");
    std::string label = arg.substr(0, eq);
    std::string path = arg.substr(eq + 1);
    try {
      models.push_back(load_metrics_file(label, path));
    } catch (const std::runtime_error& err) {
      throw UsageError(err.what());
    }
  }
  ComparisonReport report = build_comparison(models, baseline);
  std::cout << comparison_text(report);
  return kExitOk;
}

int run_curves(const std::string& in_path) {
  CurveSummary summary = summarize_curves(read_file(in_path));
  std::cout << curves_text(summary);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design-rule deck toolkit: parsing, scoring, retrieval, and corpus prep"};
  app.require_subcommand(1);
  std::optional<std::string> config_flag;
  app.add_option("--config", config_flag,
                 "Config file (default: $RULEDECK_CONFIG when set)");

  auto* parse_cmd = app.add_subcommand("parse", "Parse a rule file and report diagnostics");
  std::string parse_file;
  bool parse_serialize = false;
  parse_cmd->add_option("file", parse_file, "Rule file")->required();
  parse_cmd->add_flag("--serialize", parse_serialize, "Print linearized ASTs");

  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a rule file");
  std::string validate_file;
  std::optional<std::string> validate_registry;
  bool validate_strict = false;
  validate_cmd->add_option("file", validate_file, "Rule file")->required();
  validate_cmd->add_option("--registry", validate_registry, "Registry file");
  validate_cmd->add_flag("--strict", validate_strict, "Unknown commands become errors");

  auto* score_cmd = app.add_subcommand("score", "Score candidates against references");
  std::string score_candidates;
  std::string score_references;
  std::optional<std::string> score_weights;
  std::optional<std::string> score_out;
  score_cmd->add_option("--candidates", score_candidates, "Candidate JSONL {id, code}")
      ->required();
  score_cmd->add_option("--references", score_references, "Reference JSONL {id, code}")
      ->required();
  score_cmd->add_option("--weights", score_weights, "w1,w2,w3");
  score_cmd->add_option("--out", score_out, "Output JSON path (default stdout)");

  auto* classify_cmd = app.add_subcommand("classify", "Assign complexity classes");
  std::string classify_in;
  std::optional<std::string> classify_out;
  classify_cmd->add_option("--in", classify_in, "Corpus JSONL")->required();
  classify_cmd->add_option("--out", classify_out, "Output JSONL (default stdout)");

  auto* split_cmd = app.add_subcommand("split", "Stratified train/val/test split");
  std::string split_in;
  std::optional<std::string> split_ratios;
  std::uint64_t split_seed = 0;
  std::optional<std::string> split_out;
  split_cmd->add_option("--in", split_in, "Corpus JSONL")->required();
  split_cmd->add_option("--ratios", split_ratios, "a,b,c (default 0.8,0.1,0.1)");
  split_cmd->add_option("--seed", split_seed, "Shuffle seed");
  split_cmd->add_option("--out", split_out, "Output JSONL (default stdout)");

  auto* stats_cmd = app.add_subcommand("stats", "Corpus distribution table");
  std::string stats_in;
  bool stats_as_json = false;
  stats_cmd->add_option("--in", stats_in, "Corpus JSONL")->required();
  stats_cmd->add_flag("--json", stats_as_json, "Emit JSON instead of a table");

  auto* retrieve_cmd = app.add_subcommand("retrieve", "Top-k knowledge-base retrieval");
  std::string retrieve_kb;
  std::string retrieve_query;
  std::optional<std::string> retrieve_context;
  std::optional<std::size_t> retrieve_k;
  std::optional<double> retrieve_alpha;
  retrieve_cmd->add_option("--kb", retrieve_kb, "Knowledge base JSONL")->required();
  retrieve_cmd->add_option("--query", retrieve_query, "NL query")->required();
  retrieve_cmd->add_option("--context", retrieve_context, "Context code file");
  retrieve_cmd->add_option("-k", retrieve_k, "Result count (default: config k)");
  retrieve_cmd->add_option("--alpha", retrieve_alpha, "Semantic/structural blend");

  auto* prompt_cmd = app.add_subcommand("prompt", "Assemble an exemplar prompt");
  std::string prompt_kb;
  std::string prompt_query;
  std::optional<std::size_t> prompt_k;
  std::optional<std::string> prompt_template;
  prompt_cmd->add_option("--kb", prompt_kb, "Knowledge base JSONL")->required();
  prompt_cmd->add_option("--query", prompt_query, "NL query")->required();
  prompt_cmd->add_option("-k", prompt_k, "Exemplar count (default: config k)");
  prompt_cmd->add_option("--template", prompt_template, "Template file");

  auto* weights_cmd = app.add_subcommand("weights", "Per-token training weights");
  std::string weights_in;
  std::optional<std::string> weights_profile;
  std::string weights_out;
  weights_cmd->add_option("--in", weights_in, "Rule file")->required();
  weights_cmd->add_option("--profile", weights_profile, "Class-weight config file");
  weights_cmd->add_option("--out", weights_out, "Output JSONL ('-' for stdout)")
      ->required();

  auto* rescore_cmd = app.add_subcommand("rescore", "Penalize malformed candidates");
  std::string rescore_candidates_path;
  double rescore_lambda = 1.0;
  bool rescore_discard = false;
  bool rescore_strict = false;
  rescore_cmd
      ->add_option("--candidates", rescore_candidates_path,
                   "Candidate JSONL {code, model_score}")
      ->required();
  rescore_cmd->add_option("--lambda", rescore_lambda, "Penalty per error");
  rescore_cmd->add_flag("--discard", rescore_discard, "Drop malformed candidates");
  rescore_cmd->add_flag("--strict", rescore_strict, "Unknown commands become errors");

  auto* report_cmd = app.add_subcommand("report", "Compare labeled metric files");
  std::vector<std::string> report_metrics;
  std::optional<std::string> report_baseline;
  report_cmd->add_option("--metrics", report_metrics, "label=path (repeatable)")
      ->required();
  report_cmd->add_option("--baseline", report_baseline, "Baseline label");

  auto* curves_cmd = app.add_subcommand("curves", "Summarize learning-curve CSV");
  std::string curves_in;
  curves_cmd->add_option("--in", curves_in, "CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    RunConfig config = resolve_config(config_flag);
    if (parse_cmd->parsed()) return run_parse(parse_file, parse_serialize, config);
    if (validate_cmd->parsed())
      return run_validate(validate_file, validate_registry, validate_strict, config);
    if (score_cmd->parsed())
      return run_score(score_candidates, score_references, score_weights, score_out,
                       config);
    if (classify_cmd->parsed()) return run_classify(classify_in, classify_out, config);
    if (split_cmd->parsed())
      return run_split(split_in, split_ratios, split_seed, split_out, config);
    if (stats_cmd->parsed()) return run_stats(stats_in, stats_as_json);
    if (retrieve_cmd->parsed())
      return run_retrieve(retrieve_kb, retrieve_query, retrieve_context, retrieve_k,
                          retrieve_alpha, config);
    if (prompt_cmd->parsed())
      return run_prompt(prompt_kb, prompt_query, prompt_k, prompt_template, config);
    if (weights_cmd->parsed())
      return run_weights(weights_in, weights_profile, weights_out, config);
    if (rescore_cmd->parsed())
      return run_rescore(rescore_candidates_path, rescore_lambda, rescore_discard,
                         rescore_strict, config);
    if (report_cmd->parsed()) return run_report(report_metrics, report_baseline);
    if (curves_cmd->parsed()) return run_curves(curves_in);
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
