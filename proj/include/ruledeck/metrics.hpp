// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RULEDECK_METRICS_HPP_
#define RULEDECK_METRICS_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ruledeck/ast.hpp"
#include "ruledeck/registry.hpp"

namespace ruledeck {

// Splits on whitespace, then splits runs of the punctuation characters
// (){}=<>!, off as their own tokens, so `>=` and `==` stay single tokens.
std::vector<std::string> metric_tokenize(std::string_view text);

// Modified n-gram precision BLEU with uniform weights 1/max_n and brevity
// penalty 1 if c > r else exp(1 - r/c). A zero precision is smoothed to
// 1/(2 * candidate n-gram count); candidates shorter than max_n use their own
// length as max_n. Empty candidate or reference scores 0 and sets
// *empty_warning when provided; never throws.
double bleu(const std::vector<std::string>& candidate,
            const std::vector<std::string>& reference, int max_n = 4,
            bool* empty_warning = nullptr);

// 2 * LCS(X, Y) / (|X| + |Y|). Both sequences empty scores 1, exactly one
// empty scores 0. Symmetric in its arguments.
double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::string>& reference);

// Component weights: w1 commands, w2 options, w3 layers.
struct WeightProfile {
  double w1 = 0.4;
  double w2 = 0.2;
  double w3 = 0.4;
  bool valid() const;  // all in [0,1] and summing to 1 within 1e-9
};

struct ComponentScores {
  double c_acc = 0.0;
  double o_acc = 0.0;
  double l_acc = 0.0;
};

// Aligns candidate statements to reference statements greedily (exact name
// matches first, ties broken by layer-multiset overlap, then source order)
// and scores three components: c_acc counts aligned name matches over
// max(|ref|, |cand|); l_acc averages per-pair positional layer agreement;
// o_acc averages per-pair F1 over option multisets with the condition as a
// distinguished pseudo-option. Layer definitions take part with their target
// as the name, their leaf sequence as the layers, and their whole expression
// as a pseudo-option. Two empty lists score (1, 1, 1); an empty side against
// a non-empty one scores (0, 0, 0).
ComponentScores component_scores(const std::vector<RuleAst>& candidate,
                                 const std::vector<RuleAst>& reference);

// 100 * mean over examples of (w1*c_acc + w2*o_acc + w3*l_acc).
// Throws std::invalid_argument on an empty list.
double ast_weighted_accuracy(const std::vector<ComponentScores>& scores,
                             const WeightProfile& profile);

struct MetricScores {
  double bleu = 0.0;
  double rouge_l = 0.0;
  double ast_weighted = 0.0;  // percentage; 0 when parse_failed
  bool parse_failed = false;
};

struct MetricReport {
  std::vector<std::pair<std::string, MetricScores>> per_example;  // (id, scores)
  double corpus_bleu = 0.0;
  double corpus_rouge_l = 0.0;
  double corpus_ast_weighted = 0.0;
  std::size_t n = 0;  // == per_example.size()
  std::vector<std::string> errors;    // rejected pairs, e.g. unparseable references
  std::vector<std::string> warnings;  // e.g. empty token sequences
};

struct EvalPair {
  std::string id;
  std::string candidate;
  std::string reference;
};

// Scores every pair. References that fail to parse are rejected with a
// per-pair error and excluded from the aggregation; candidates that fail to
// parse keep their BLEU/ROUGE-L scores but contribute 0 to ast_weighted.
// Corpus values are arithmetic means over the scored pairs.
MetricReport evaluate_corpus(const std::vector<EvalPair>& pairs,
                             const WeightProfile& profile,
                             const CommandRegistry& registry);

// 100 * (improved - baseline) / baseline. Throws std::invalid_argument when
// baseline <= 0.
double relative_improvement(double baseline, double improved);

// {n, corpus: {bleu, rouge_l, ast_weighted}, per_example: [...]} rendered
// with two-space indentation.
std::string metric_report_json(const MetricReport& report);

}  // namespace ruledeck

#endif  // RULEDECK_METRICS_HPP_
