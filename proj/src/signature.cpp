// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "ruledeck/signature.hpp"

#include <algorithm>
#include <map>

namespace ruledeck {

namespace {

class SignatureBuilder {
 public:
  AstSignature build(const RuleAst& ast) {
    if (const auto* cmd = std::get_if<CommandNode>(&ast))
      walk_command(*cmd);
    else
      walk_layer_def(std::get<LayerDefNode>(ast));
    std::sort(sig_.bigrams.begin(), sig_.bigrams.end());
    return std::move(sig_);
  }

 private:
  std::string placeholder(const std::string& layer) {
    auto [it, inserted] = placeholders_.try_emplace(layer, placeholders_.size() + 1);
    (void)inserted;
    return "L" + std::to_string(it->second);
  }

  void edge(const std::string& parent, std::string child) {
    sig_.bigrams.emplace_back(parent, std::move(child));
  }

  void walk_command(const CommandNode& cmd) {
    edge("^", "COMMAND");
    edge("COMMAND", "NAME:" + cmd.name);
    edge("COMMAND", "LAYERS");
    for (const std::string& layer : cmd.layers)
      edge("LAYERS", "LAYER:" + placeholder(layer));
    if (cmd.condition) {
      edge("COMMAND", "CONDITION");
      edge("CONDITION", "OP:" + cmd.condition->op);
      edge("CONDITION", "VAL:#");
      if (cmd.condition->unit) edge("CONDITION", "UNIT:" + *cmd.condition->unit);
    }
    if (!cmd.options.empty()) {
      edge("COMMAND", "OPTIONS");
      for (const OptionNode& option : cmd.options) {
        std::string label = "OPT:" + option.key;
        edge("OPTIONS", label);
        for (const OptionAtom& atom : option.values) {
          switch (atom.kind) {
            case OptionAtom::Kind::Ident: edge(label, "ATOM:" + atom.text); break;
            case OptionAtom::Kind::Number: edge(label, "ATOM:#"); break;
            case OptionAtom::Kind::Str: edge(label, "STR:#"); break;
          }
        }
      }
    }
  }

  std::string expr_label(const LayerExprNode& expr) {
    switch (expr.kind) {
      case LayerExprNode::Kind::Leaf: return "LAYER:" + placeholder(expr.layer);
      case LayerExprNode::Kind::Not: return "NOT";
      case LayerExprNode::Kind::And: return "AND";
      case LayerExprNode::Kind::Or: return "OR";
    }
    return "";
  }

  void walk_expr(const LayerExprNode& expr, const std::string& label) {
    for (const LayerExprNode& child : expr.children) {
      std::string child_label = expr_label(child);
      edge(label, child_label);
      walk_expr(child, child_label);
    }
  }

  void walk_layer_def(const LayerDefNode& def) {
    edge("^", "LAYERDEF");
    edge("LAYERDEF", "TARGET:" + placeholder(def.target));
    edge("LAYERDEF", "EXPR");
    std::string root_label = expr_label(def.expr);
    edge("EXPR", root_label);
    walk_expr(def.expr, root_label);
  }

  AstSignature sig_;
  std::map<std::string, std::size_t> placeholders_;
};

}  // namespace

AstSignature signature(const RuleAst& ast) { return SignatureBuilder().build(ast); }

double jaccard(const AstSignature& a, const AstSignature& b) {
  if (a.bigrams.empty() && b.bigrams.empty()) return 1.0;
  std::size_t intersection = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.bigrams.size() && j < b.bigrams.size()) {
    if (a.bigrams[i] < b.bigrams[j]) {
      ++i;
    } else if (b.bigrams[j] < a.bigrams[i]) {
      ++j;
    } else {
      ++intersection;
      ++i;
      ++j;
    }
  }
  std::size_t unions = a.bigrams.size() + b.bigrams.size() - intersection;
  return static_cast<double>(intersection) / static_cast<double>(unions);
}

}  // namespace ruledeck
