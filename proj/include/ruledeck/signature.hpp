// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RULEDECK_SIGNATURE_HPP_
#define RULEDECK_SIGNATURE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "ruledeck/ast.hpp"

namespace ruledeck {

// Structural fingerprint of a RuleAst: the multiset of (parent label, child
// label) bigrams from a depth-first walk, including a virtual edge above the
// root. Layer identifiers are replaced by first-occurrence placeholders
// L1, L2, ... and numeric/string values by "#", so the signature is invariant
// under layer renaming and value changes while staying sensitive to command
// names, option keys, operator structure, and layer count.
struct AstSignature {
  std::vector<std::pair<std::string, std::string>> bigrams;  // sorted multiset
  bool operator==(const AstSignature&) const = default;
};

AstSignature signature(const RuleAst& ast);

// Multiset Jaccard similarity in [0, 1]; 1.0 for identical signatures and for
// two empty signatures.
double jaccard(const AstSignature& a, const AstSignature& b);

}  // namespace ruledeck

#endif  // RULEDECK_SIGNATURE_HPP_
