// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RULEDECK_DIFF_HPP_
#define RULEDECK_DIFF_HPP_

#include <string>
#include <vector>

#include "ruledeck/ast.hpp"

namespace ruledeck {

enum class MismatchKind { MissingNode, ExtraNode, LabelMismatch, OrderMismatch };

const char* to_string(MismatchKind kind);

struct Mismatch {
  std::string path;  // slash-joined, e.g. COMMAND/LAYERS or LAYERDEF/EXPR
  MismatchKind kind = MismatchKind::LabelMismatch;
  std::string candidate_fragment;
  std::string reference_fragment;
  bool operator==(const Mismatch&) const = default;
};

// Empty iff the two ASTs are structurally equal. Each mismatch names the
// deepest path at which the trees diverge; a pure reordering of the same
// layer multiset is reported as a single ORDER_MISMATCH under LAYERS.
struct DiffReport {
  std::vector<Mismatch> mismatches;
  bool empty() const { return mismatches.empty(); }
};

DiffReport structural_diff(const RuleAst& candidate, const RuleAst& reference);

}  // namespace ruledeck

#endif  // RULEDECK_DIFF_HPP_
