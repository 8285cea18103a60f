// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RULEDECK_TRAIN_HPP_
#define RULEDECK_TRAIN_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ruledeck/diagnostics.hpp"
#include "ruledeck/registry.hpp"

namespace ruledeck {

enum class TokenClass { Command, Layer, Condition, Option, Structure };

const char* to_string(TokenClass cls);

// Per-class loss weights consumed by an external trainer. Defaults put
// commands above layers above everything else.
struct TokenClassWeights {
  double command = 3.0;
  double layer = 2.5;
  double condition = 2.0;
  double option = 1.0;
  double structure = 1.5;
  bool valid() const;  // all positive, command >= layer > option
  double weight(TokenClass cls) const;
};

// Parallel per-token annotation of one source text, in source order.
struct TokenWeightMap {
  std::vector<std::string> tokens;
  std::vector<TokenClass> classes;
  std::vector<double> weights;
};

// Classifies every token of a parseable source by its role in the parse tree
// (command names, layer identifiers, condition operator/value/unit, option
// keys and values including REPORT payloads, and structural punctuation) and
// assigns the class weight. Throws std::runtime_error when the source does
// not parse cleanly.
TokenWeightMap token_weights(std::string_view reference_code,
                             const TokenClassWeights& class_weights,
                             const CommandRegistry& registry);

// One {token, class, weight} JSON object per line.
std::string token_weight_jsonl(const TokenWeightMap& map);

struct ScoredCandidate {
  std::string code;
  double model_score = 0.0;  // log-probability scale
};

struct RescoreResult {
  std::string candidate_code;
  double model_score = 0.0;
  double penalty = 0.0;  // lambda * ERROR count; 0 for well-formed candidates
  double final_score = 0.0;
  Diagnostics diagnostics;
};

struct RescoreOutcome {
  std::vector<RescoreResult> results;  // final_score descending, stable
  std::vector<std::string> warnings;
};

// Penalizes each candidate by lambda_malformed per ERROR found by parsing and
// validating it, then sorts by final_score descending (stable, so ties keep
// their original order). In discard mode candidates with penalty > 0 are
// dropped; dropping everything leaves an empty list plus a warning.
RescoreOutcome rescore_candidates(const std::vector<ScoredCandidate>& candidates,
                                  double lambda_malformed,
                                  const CommandRegistry& registry, bool strict,
                                  bool discard);

struct ValidationReport {
  bool well_formed = false;  // zero ERROR diagnostics from parse + validate
  Diagnostics diagnostics;
  std::optional<std::string> ast;  // linearized statements, one per line
};

ValidationReport validate_generation(std::string_view code,
                                     const CommandRegistry& registry, bool strict);

}  // namespace ruledeck

#endif  // RULEDECK_TRAIN_HPP_
