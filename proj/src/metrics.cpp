// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "ruledeck/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>

#include "json.hpp"

#include "ruledeck/parser.hpp"

namespace ruledeck {

namespace {

bool is_metric_punct(char c) { return std::strchr("(){}=<>!,", c) != nullptr; }

// Counts n-grams as joined strings; '\x1f' cannot appear inside a token.
std::map<std::string, int> ngram_counts(const std::vector<std::string>& tokens, int n) {
  std::map<std::string, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int j = 1; j < n; ++j) {
      key += '\x1f';
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

struct AlignUnit {
  std::string name;
  std::vector<std::string> layers;
  std::vector<std::string> options;  // sorted canonical items, condition included
};

std::string option_item(const OptionNode& option) {
  std::string out = option.key;
  for (const OptionAtom& atom : option.values) {
    out += '\x1f';
    out += static_cast<char>('0' + static_cast<int>(atom.kind));
    out += atom.text;
  }
  return out;
}

void collect_leaves(const LayerExprNode& expr, std::vector<std::string>& out) {
  if (expr.kind == LayerExprNode::Kind::Leaf) {
    out.push_back(expr.layer);
    return;
  }
  for (const LayerExprNode& child : expr.children) collect_leaves(child, out);
}

AlignUnit to_align_unit(const RuleAst& ast) {
  AlignUnit unit;
  if (const auto* cmd = std::get_if<CommandNode>(&ast)) {
    unit.name = cmd->name;
    unit.layers = cmd->layers;
    for (const OptionNode& option : cmd->options) unit.options.push_back(option_item(option));
    if (cmd->condition) {
      std::string cond = "COND\x1f" + cmd->condition->op + "\x1f" +
                         canonical_number(cmd->condition->value);
      if (cmd->condition->unit) cond += *cmd->condition->unit;
      unit.options.push_back(std::move(cond));
    }
  } else {
    const auto& def = std::get<LayerDefNode>(ast);
    unit.name = "=" + def.target;
    collect_leaves(def.expr, unit.layers);
    unit.options.push_back("EXPR\x1f" + serialize(ast));
  }
  std::sort(unit.options.begin(), unit.options.end());
  return unit;
}

std::size_t multiset_intersection(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return common;
}

double layer_multiset_jaccard(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = multiset_intersection(a, b);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

double pair_layer_accuracy(const AlignUnit& cand, const AlignUnit& ref) {
  std::size_t denom = std::max(cand.layers.size(), ref.layers.size());
  if (denom == 0) return 1.0;
  std::size_t agree = 0;
  std::size_t common = std::min(cand.layers.size(), ref.layers.size());
  for (std::size_t i = 0; i < common; ++i)
    if (cand.layers[i] == ref.layers[i]) ++agree;
  return static_cast<double>(agree) / static_cast<double>(denom);
}

double pair_option_f1(const AlignUnit& cand, const AlignUnit& ref) {
  if (cand.options.empty() && ref.options.empty()) return 1.0;
  std::size_t common = multiset_intersection(cand.options, ref.options);
  return 2.0 * static_cast<double>(common) /
         static_cast<double>(cand.options.size() + ref.options.size());
}

double percent_score(const ComponentScores& scores, const WeightProfile& profile) {
  return (100.0 * profile.w1) * scores.c_acc + (100.0 * profile.w2) * scores.o_acc +
         (100.0 * profile.w3) * scores.l_acc;
}

}  // namespace

std::vector<std::string> metric_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_metric_punct(text[i])) {
      while (i < text.size() && is_metric_punct(text[i])) ++i;
    } else {
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             !is_metric_punct(text[i]))
        ++i;
    }
    tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

double bleu(const std::vector<std::string>& candidate,
            const std::vector<std::string>& reference, int max_n, bool* empty_warning) {
  if (candidate.empty() || reference.empty()) {
    if (empty_warning != nullptr) *empty_warning = true;
    return 0.0;
  }
  int c = static_cast<int>(candidate.size());
  int r = static_cast<int>(reference.size());
  int effective_n = std::min(max_n, c);

  double log_sum = 0.0;
  for (int n = 1; n <= effective_n; ++n) {
    auto cand_counts = ngram_counts(candidate, n);
    auto ref_counts = ngram_counts(reference, n);
    int total = 0;
    int clipped = 0;
    for (const auto& [gram, count] : cand_counts) {
      total += count;
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) clipped += std::min(count, it->second);
    }
    double p = static_cast<double>(clipped) / static_cast<double>(total);
    if (clipped == 0) p = 1.0 / (2.0 * static_cast<double>(total));
    log_sum += std::log(p) / static_cast<double>(effective_n);
  }
  double bp = c > r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  double score = bp * std::exp(log_sum);
  return std::clamp(score, 0.0, 1.0);
}

double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::string>& reference) {
  if (candidate.empty() && reference.empty()) return 1.0;
  if (candidate.empty() || reference.empty()) return 0.0;
  std::size_t n = candidate.size();
  std::size_t m = reference.size();
  std::vector<std::size_t> prev(m + 1, 0);
  std::vector<std::size_t> cur(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      if (candidate[i - 1] == reference[j - 1])
        cur[j] = prev[j - 1] + 1;
      else
        cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  double lcs = static_cast<double>(prev[m]);
  return 2.0 * lcs / static_cast<double>(n + m);
}

bool WeightProfile::valid() const {
  auto in_range = [](double w) { return w >= 0.0 && w <= 1.0; };
  return in_range(w1) && in_range(w2) && in_range(w3) &&
         std::abs(w1 + w2 + w3 - 1.0) <= 1e-9;
}

ComponentScores component_scores(const std::vector<RuleAst>& candidate,
                                 const std::vector<RuleAst>& reference) {
  if (candidate.empty() && reference.empty()) return {1.0, 1.0, 1.0};
  if (candidate.empty() || reference.empty()) return {0.0, 0.0, 0.0};

  std::vector<AlignUnit> cand_units;
  std::vector<AlignUnit> ref_units;
  for (const RuleAst& ast : candidate) cand_units.push_back(to_align_unit(ast));
  for (const RuleAst& ast : reference) ref_units.push_back(to_align_unit(ast));

  struct PairScore {
    bool name_eq;
    double jaccard;
    std::size_t ci;
    std::size_t ri;
  };
  std::vector<PairScore> pairs;
  pairs.reserve(cand_units.size() * ref_units.size());
  for (std::size_t ci = 0; ci < cand_units.size(); ++ci)
    for (std::size_t ri = 0; ri < ref_units.size(); ++ri)
      pairs.push_back({cand_units[ci].name == ref_units[ri].name,
                       layer_multiset_jaccard(cand_units[ci].layers, ref_units[ri].layers),
                       ci, ri});
  std::sort(pairs.begin(), pairs.end(), [](const PairScore& a, const PairScore& b) {
    if (a.name_eq != b.name_eq) return a.name_eq;
    if (a.jaccard != b.jaccard) return a.jaccard > b.jaccard;
    if (a.ci != b.ci) return a.ci < b.ci;
    return a.ri < b.ri;
  });

  std::vector<bool> cand_used(cand_units.size(), false);
  std::vector<bool> ref_used(ref_units.size(), false);
  std::size_t name_matches = 0;
  double l_sum = 0.0;
  double o_sum = 0.0;
  std::size_t aligned = 0;
  for (const PairScore& pair : pairs) {
    if (cand_used[pair.ci] || ref_used[pair.ri]) continue;
    cand_used[pair.ci] = true;
    ref_used[pair.ri] = true;
    ++aligned;
    if (pair.name_eq) ++name_matches;
    l_sum += pair_layer_accuracy(cand_units[pair.ci], ref_units[pair.ri]);
    o_sum += pair_option_f1(cand_units[pair.ci], ref_units[pair.ri]);
  }

  std::size_t denom = std::max(cand_units.size(), ref_units.size());
  ComponentScores scores;
  scores.c_acc = static_cast<double>(name_matches) / static_cast<double>(denom);
  scores.l_acc = aligned == 0 ? 0.0 : l_sum / static_cast<double>(aligned);
  scores.o_acc = aligned == 0 ? 0.0 : o_sum / static_cast<double>(aligned);
  return scores;
}

double ast_weighted_accuracy(const std::vector<ComponentScores>& scores,
                             const WeightProfile& profile) {
  if (scores.empty()) throw std::invalid_argument("empty evaluation set");
  double sum = 0.0;
  for (const ComponentScores& example : scores) sum += percent_score(example, profile);
  double mean = sum / static_cast<double>(scores.size());
  return std::clamp(mean, 0.0, 100.0);
}

MetricReport evaluate_corpus(const std::vector<EvalPair>& pairs,
                             const WeightProfile& profile,
                             const CommandRegistry& registry) {
  MetricReport report;
  for (const EvalPair& pair : pairs) {
    ParseResult ref_parse = parse_deck(pair.reference, registry);
    if (count_errors(ref_parse.diagnostics) > 0) {
      report.errors.push_back("reference " + pair.id + " failed to parse: " +
                              to_string(ref_parse.diagnostics.front()));
      continue;
    }
    MetricScores scores;
    std::vector<std::string> cand_tokens = metric_tokenize(pair.candidate);
    std::vector<std::string> ref_tokens = metric_tokenize(pair.reference);
    bool warned = false;
    scores.bleu = bleu(cand_tokens, ref_tokens, 4, &warned);
    scores.rouge_l = rouge_l(cand_tokens, ref_tokens);
    if (warned)
      report.warnings.push_back("pair " + pair.id + " has an empty token sequence");

    ParseResult cand_parse = parse_deck(pair.candidate, registry);
    if (count_errors(cand_parse.diagnostics) > 0) {
      scores.parse_failed = true;
      scores.ast_weighted = 0.0;
    } else {
      ComponentScores components =
          component_scores(lower(*cand_parse.deck), lower(*ref_parse.deck));
      scores.ast_weighted = ast_weighted_accuracy({components}, profile);
    }
    report.per_example.emplace_back(pair.id, scores);
  }
  report.n = report.per_example.size();
  if (report.n > 0) {
    double bleu_sum = 0.0;
    double rouge_sum = 0.0;
    double acc_sum = 0.0;
    for (const auto& [id, scores] : report.per_example) {
      bleu_sum += scores.bleu;
      rouge_sum += scores.rouge_l;
      acc_sum += scores.ast_weighted;
    }
    double n = static_cast<double>(report.n);
    report.corpus_bleu = bleu_sum / n;
    report.corpus_rouge_l = rouge_sum / n;
    report.corpus_ast_weighted = acc_sum / n;
  }
  return report;
}

double relative_improvement(double baseline, double improved) {
  if (baseline <= 0.0)
    throw std::invalid_argument("relative improvement requires a positive baseline");
  return 100.0 * (improved - baseline) / baseline;
}

std::string metric_report_json(const MetricReport& report) {
  nlohmann::json doc;
  doc["n"] = report.n;
  doc["corpus"] = {{"bleu", report.corpus_bleu},
                   {"rouge_l", report.corpus_rouge_l},
                   {"ast_weighted", report.corpus_ast_weighted}};
  doc["per_example"] = nlohmann::json::array();
  for (const auto& [id, scores] : report.per_example)
    doc["per_example"].push_back({{"id", id},
                                  {"bleu", scores.bleu},
                                  {"rouge_l", scores.rouge_l},
                                  {"ast_weighted", scores.ast_weighted},
                                  {"parse_failed", scores.parse_failed}});
  if (!report.errors.empty()) doc["errors"] = report.errors;
  if (!report.warnings.empty()) doc["warnings"] = report.warnings;
  return doc.dump(2);
}

}  // namespace ruledeck
