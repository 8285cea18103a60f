// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "ruledeck/diff.hpp"

#include <algorithm>

namespace ruledeck {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += " ";
    out += items[i];
  }
  return out;
}

std::string option_fragment(const OptionNode& option) {
  std::string out = "(" + option.key;
  for (const OptionAtom& atom : option.values) {
    out += " ";
    if (atom.kind == OptionAtom::Kind::Str)
      out += "\"" + atom.text + "\"";
    else
      out += atom.text;
  }
  out += ")";
  return out;
}

std::string expr_fragment(const LayerExprNode& expr) {
  switch (expr.kind) {
    case LayerExprNode::Kind::Leaf: return "(LAYER " + expr.layer + ")";
    case LayerExprNode::Kind::Not: return "(NOT " + expr_fragment(expr.children[0]) + ")";
    case LayerExprNode::Kind::And:
      return "(AND " + expr_fragment(expr.children[0]) + " " +
             expr_fragment(expr.children[1]) + ")";
    case LayerExprNode::Kind::Or:
      return "(OR " + expr_fragment(expr.children[0]) + " " +
             expr_fragment(expr.children[1]) + ")";
  }
  return "";
}

std::string expr_label(const LayerExprNode& expr) {
  switch (expr.kind) {
    case LayerExprNode::Kind::Leaf: return "LAYER " + expr.layer;
    case LayerExprNode::Kind::Not: return "NOT";
    case LayerExprNode::Kind::And: return "AND";
    case LayerExprNode::Kind::Or: return "OR";
  }
  return "";
}

std::string condition_value(const Condition& cond) {
  std::string out = canonical_number(cond.value);
  if (cond.unit) out += *cond.unit;
  return out;
}

class Differ {
 public:
  DiffReport run(const RuleAst& candidate, const RuleAst& reference) {
    if (candidate.index() != reference.index()) {
      add("(root)", MismatchKind::LabelMismatch,
          std::holds_alternative<CommandNode>(candidate) ? "COMMAND" : "LAYERDEF",
          std::holds_alternative<CommandNode>(reference) ? "COMMAND" : "LAYERDEF");
      return std::move(report_);
    }
    if (const auto* cand = std::get_if<CommandNode>(&candidate))
      diff_command(*cand, std::get<CommandNode>(reference));
    else
      diff_layer_def(std::get<LayerDefNode>(candidate), std::get<LayerDefNode>(reference));
    return std::move(report_);
  }

 private:
  void add(std::string path, MismatchKind kind, std::string cand, std::string ref) {
    report_.mismatches.push_back({std::move(path), kind, std::move(cand), std::move(ref)});
  }

  void diff_layers(const std::vector<std::string>& cand,
                   const std::vector<std::string>& ref) {
    if (cand == ref) return;
    std::vector<std::string> cand_sorted = cand;
    std::vector<std::string> ref_sorted = ref;
    std::sort(cand_sorted.begin(), cand_sorted.end());
    std::sort(ref_sorted.begin(), ref_sorted.end());
    if (cand_sorted == ref_sorted) {
      add("COMMAND/LAYERS", MismatchKind::OrderMismatch, join(cand), join(ref));
      return;
    }
    std::size_t common = std::min(cand.size(), ref.size());
    for (std::size_t i = 0; i < common; ++i)
      if (cand[i] != ref[i])
        add("COMMAND/LAYERS/" + std::to_string(i + 1), MismatchKind::LabelMismatch,
            cand[i], ref[i]);
    for (std::size_t i = common; i < cand.size(); ++i)
      add("COMMAND/LAYERS", MismatchKind::ExtraNode, cand[i], "");
    for (std::size_t i = common; i < ref.size(); ++i)
      add("COMMAND/LAYERS", MismatchKind::MissingNode, "", ref[i]);
  }

  void diff_condition(const std::optional<Condition>& cand,
                      const std::optional<Condition>& ref) {
    if (!cand && !ref) return;
    if (cand && !ref) {
      add("COMMAND/CONDITION", MismatchKind::ExtraNode,
          "(" + cand->op + " " + condition_value(*cand) + ")", "");
      return;
    }
    if (!cand && ref) {
      add("COMMAND/CONDITION", MismatchKind::MissingNode, "",
          "(" + ref->op + " " + condition_value(*ref) + ")");
      return;
    }
    if (cand->op != ref->op)
      add("COMMAND/CONDITION/OP", MismatchKind::LabelMismatch, cand->op, ref->op);
    if (cand->value != ref->value || cand->unit != ref->unit)
      add("COMMAND/CONDITION/VAL", MismatchKind::LabelMismatch, condition_value(*cand),
          condition_value(*ref));
  }

  void diff_options(const std::vector<OptionNode>& cand,
                    const std::vector<OptionNode>& ref) {
    std::size_t common = std::min(cand.size(), ref.size());
    for (std::size_t i = 0; i < common; ++i) {
      if (cand[i] == ref[i]) continue;
      if (cand[i].key != ref[i].key)
        add("COMMAND/OPTIONS", MismatchKind::LabelMismatch, option_fragment(cand[i]),
            option_fragment(ref[i]));
      else
        add("COMMAND/OPTIONS/" + ref[i].key, MismatchKind::LabelMismatch,
            option_fragment(cand[i]), option_fragment(ref[i]));
    }
    for (std::size_t i = common; i < cand.size(); ++i)
      add("COMMAND/OPTIONS", MismatchKind::ExtraNode, option_fragment(cand[i]), "");
    for (std::size_t i = common; i < ref.size(); ++i)
      add("COMMAND/OPTIONS", MismatchKind::MissingNode, "", option_fragment(ref[i]));
  }

  void diff_command(const CommandNode& cand, const CommandNode& ref) {
    if (cand.name != ref.name)
      add("COMMAND/NAME", MismatchKind::LabelMismatch, cand.name, ref.name);
    diff_layers(cand.layers, ref.layers);
    diff_condition(cand.condition, ref.condition);
    diff_options(cand.options, ref.options);
  }

  void diff_expr(const LayerExprNode& cand, const LayerExprNode& ref,
                 const std::string& path) {
    if (cand.kind != ref.kind ||
        (cand.kind == LayerExprNode::Kind::Leaf && cand.layer != ref.layer)) {
      add(path, MismatchKind::LabelMismatch, expr_fragment(cand), expr_fragment(ref));
      return;
    }
    for (std::size_t i = 0; i < cand.children.size(); ++i)
      diff_expr(cand.children[i], ref.children[i], path + "/" + expr_label(cand));
  }

  void diff_layer_def(const LayerDefNode& cand, const LayerDefNode& ref) {
    if (cand.target != ref.target)
      add("LAYERDEF/TARGET", MismatchKind::LabelMismatch, cand.target, ref.target);
    diff_expr(cand.expr, ref.expr, "LAYERDEF/EXPR");
  }

  DiffReport report_;
};

}  // namespace

const char* to_string(MismatchKind kind) {
  switch (kind) {
    case MismatchKind::MissingNode: return "MISSING_NODE";
    case MismatchKind::ExtraNode: return "EXTRA_NODE";
    case MismatchKind::LabelMismatch: return "LABEL_MISMATCH";
    case MismatchKind::OrderMismatch: return "ORDER_MISMATCH";
  }
  return "UNKNOWN";
}

DiffReport structural_diff(const RuleAst& candidate, const RuleAst& reference) {
  return Differ().run(candidate, reference);
}

}  // namespace ruledeck
