// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "ruledeck/diagnostics.hpp"
#include "ruledeck/registry.hpp"
#include "ruledeck/token.hpp"

namespace ruledeck {

enum class NodeKind {
  Deck,
  RuleCheck,
  LayerDef,
  LayerExpr,
  Condition,
  Option,
  Block,
  ReportStmt,
  Terminal,
};

const char* to_string(NodeKind kind);

/// Concrete syntax tree. Terminal nodes carry the token; every other node
/// spans its children. A Deck may be empty; all other non-terminals have at
/// least one child.
struct ParseTree {
  NodeKind kind = NodeKind::Deck;
  std::vector<std::unique_ptr<ParseTree>> children;
  Token token;  // meaningful for Terminal nodes only
  SourceSpan span;

  bool is_terminal() const { return kind == NodeKind::Terminal; }
  const ParseTree& child(std::size_t i) const { return *children[i]; }
};

struct ParseResult {
  std::unique_ptr<ParseTree> deck;
  Diagnostics diagnostics;
};

/// Total parser: any input yields a Deck plus diagnostics. Statements that
/// fail to parse are dropped from the deck; recovery resumes at the next
/// statement start (a command identifier, or an identifier followed by `=`).
ParseResult parse_deck(std::string_view source, const CommandRegistry& registry);

/// Registry-driven checks on a parsed deck: layer counts, required
/// conditions, allowed option keys, block permission. Unknown commands are
/// errors in strict mode, warnings otherwise. Pure analysis.
Diagnostics validate(const ParseTree& deck, const CommandRegistry& registry, bool strict);

}  // namespace ruledeck
