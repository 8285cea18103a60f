// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "ruledeck/train.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

#include "ruledeck/ast.hpp"
#include "ruledeck/parser.hpp"

namespace ruledeck {

namespace {

// Picks the class for terminals that are direct children of `node`.
TokenClass terminal_class(const ParseTree& node, const ParseTree& terminal,
                          bool is_first_child) {
  switch (node.kind) {
    case NodeKind::RuleCheck:
      return is_first_child ? TokenClass::Command : TokenClass::Layer;
    case NodeKind::Condition:
      return TokenClass::Condition;
    case NodeKind::Option:
    case NodeKind::ReportStmt:
      return TokenClass::Option;
    case NodeKind::LayerDef:
      // target = expr: the target names a layer, the '=' is structural.
      return terminal.token.is(TokenKind::Assign) ? TokenClass::Structure
                                                  : TokenClass::Layer;
    case NodeKind::LayerExpr:
      return terminal.token.is(TokenKind::Ident) ? TokenClass::Layer
                                                 : TokenClass::Structure;
    case NodeKind::Block:
      return TokenClass::Structure;  // the braces
    default:
      return TokenClass::Structure;
  }
}

void classify_node(const ParseTree& node, TokenWeightMap& map,
                   const TokenClassWeights& weights) {
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const ParseTree& child = node.child(i);
    if (child.is_terminal()) {
      TokenClass cls = terminal_class(node, child, i == 0);
      map.tokens.push_back(child.token.text);
      map.classes.push_back(cls);
      map.weights.push_back(weights.weight(cls));
    } else {
      classify_node(child, map, weights);
    }
  }
}

}  // namespace

const char* to_string(TokenClass cls) {
  switch (cls) {
    case TokenClass::Command: return "command";
    case TokenClass::Layer: return "layer";
    case TokenClass::Condition: return "condition";
    case TokenClass::Option: return "option";
    case TokenClass::Structure: return "structure";
  }
  return "unknown";
}

bool TokenClassWeights::valid() const {
  return command > 0 && layer > 0 && condition > 0 && option > 0 && structure > 0 &&
         command >= layer && layer > option;
}

double TokenClassWeights::weight(TokenClass cls) const {
  switch (cls) {
    case TokenClass::Command: return command;
    case TokenClass::Layer: return layer;
    case TokenClass::Condition: return condition;
    case TokenClass::Option: return option;
    case TokenClass::Structure: return structure;
  }
  return 0.0;
}

TokenWeightMap token_weights(std::string_view reference_code,
                             const TokenClassWeights& class_weights,
                             const CommandRegistry& registry) {
  ParseResult parsed = parse_deck(reference_code, registry);
  if (count_errors(parsed.diagnostics) > 0)
    throw std::runtime_error("token weights require parseable input: " +
                             to_string(parsed.diagnostics.front()));
  TokenWeightMap map;
  classify_node(*parsed.deck, map, class_weights);
  return map;
}

std::string token_weight_jsonl(const TokenWeightMap& map) {
  std::string out;
  for (std::size_t i = 0; i < map.tokens.size(); ++i) {
    nlohmann::json record = {{"token", map.tokens[i]},
                             {"class", to_string(map.classes[i])},
                             {"weight", map.weights[i]}};
    out += record.dump();
    out += "\n";
  }
  return out;
}

RescoreOutcome rescore_candidates(const std::vector<ScoredCandidate>& candidates,
                                  double lambda_malformed,
                                  const CommandRegistry& registry, bool strict,
                                  bool discard) {
  RescoreOutcome outcome;
  for (const ScoredCandidate& candidate : candidates) {
    ParseResult parsed = parse_deck(candidate.code, registry);
    Diagnostics diags = std::move(parsed.diagnostics);
    Diagnostics validation = validate(*parsed.deck, registry, strict);
    diags.insert(diags.end(), validation.begin(), validation.end());

    RescoreResult result;
    result.candidate_code = candidate.code;
    result.model_score = candidate.model_score;
    result.penalty = lambda_malformed * static_cast<double>(count_errors(diags));
    result.final_score = result.model_score - result.penalty;
    result.diagnostics = std::move(diags);
    if (discard && result.penalty > 0.0) continue;
    outcome.results.push_back(std::move(result));
  }
  std::stable_sort(outcome.results.begin(), outcome.results.end(),
                   [](const RescoreResult& a, const RescoreResult& b) {
                     return a.final_score > b.final_score;
                   });
  if (discard && outcome.results.empty() && !candidates.empty())
    outcome.warnings.push_back("all candidates discarded as malformed");
  return outcome;
}

ValidationReport validate_generation(std::string_view code,
                                     const CommandRegistry& registry, bool strict) {
  ParseResult parsed = parse_deck(code, registry);
  ValidationReport report;
  report.diagnostics = std::move(parsed.diagnostics);
  Diagnostics validation = validate(*parsed.deck, registry, strict);
  report.diagnostics.insert(report.diagnostics.end(), validation.begin(),
                            validation.end());
  report.well_formed = count_errors(report.diagnostics) == 0;
  if (report.well_formed) {
    std::string lines;
    for (const RuleAst& ast : lower(*parsed.deck)) {
      if (!lines.empty()) lines += "\n";
      lines += serialize(ast);
    }
    report.ast = std::move(lines);
  }
  return report;
}

}  // namespace ruledeck
