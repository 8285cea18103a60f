// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RULEDECK_AST_HPP_
#define RULEDECK_AST_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ruledeck/parser.hpp"

namespace ruledeck {

// Comparison applied to a rule check, e.g. `>= 0.5um`.
struct Condition {
  std::string op;
  double value = 0.0;
  std::optional<std::string> unit;
  bool operator==(const Condition&) const = default;
};

// A single value inside an option. Numbers are stored in canonical form and
// strings are stored decoded, so equal atoms always compare equal.
struct OptionAtom {
  enum class Kind { Ident, Number, Str };
  Kind kind = Kind::Ident;
  std::string text;
  bool operator==(const OptionAtom&) const = default;
};

// One option of a rule check. `READ ALL` is stored under the key MODE, and
// report statements are stored under the key REPORT.
struct OptionNode {
  std::string key;
  std::vector<OptionAtom> values;
  bool operator==(const OptionNode&) const = default;
};

// Boolean combination of layers. Leaf carries `layer`; Not has one child;
// And/Or have exactly two children.
struct LayerExprNode {
  enum class Kind { Leaf, Not, And, Or };
  Kind kind = Kind::Leaf;
  std::string layer;
  std::vector<LayerExprNode> children;
  bool operator==(const LayerExprNode&) const = default;
};

struct CommandNode {
  std::string name;
  std::vector<std::string> layers;  // non-empty
  std::optional<Condition> condition;
  std::vector<OptionNode> options;  // source order
  bool operator==(const CommandNode&) const = default;
};

struct LayerDefNode {
  std::string target;
  LayerExprNode expr;
  bool operator==(const LayerDefNode&) const = default;
};

using RuleAst = std::variant<CommandNode, LayerDefNode>;

// Shortest decimal form that round-trips the value, e.g. 0.5 -> "0.5".
std::string canonical_number(double value);

// Lowers a DECK parse tree into one RuleAst per statement. Statements nested
// inside blocks are emitted depth-first after their parent; the REPORT lines
// of a block become REPORT options of the enclosing command.
// Requires a tree from parse_deck whose statements parsed without errors.
std::vector<RuleAst> lower(const ParseTree& deck);

// Linearized bracketed form, e.g.
//   (COMMAND (NAME SPACE_CMD) (LAYERS (LAYER METAL1)) (CONDITION (OP >=) (VAL 0.5)))
//   (LAYERDEF (TARGET M3) (EXPR (AND (LAYER METAL1) (LAYER METAL2))))
// Absent condition/options sections are omitted entirely. Strings keep their
// double quotes with `"` and `\` escaped. Distinct ASTs serialize to distinct
// strings and deserialize(serialize(a)) == a.
std::string serialize(const RuleAst& ast);

struct DeserializeError {
  std::string message;  // includes the character offset where useful
  std::size_t offset = 0;
};

struct DeserializeResult {
  std::optional<RuleAst> ast;
  std::optional<DeserializeError> error;
  bool ok() const { return ast.has_value(); }
};

// Parses one linearized AST. Unbalanced parentheses, unknown tags, malformed
// escapes, and missing required sections are reported with character offsets.
DeserializeResult deserialize(std::string_view text);

}  // namespace ruledeck

#endif  // RULEDECK_AST_HPP_
