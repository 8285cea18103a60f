// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RULEDECK_TESTS_SUPPORT_ORACLES_HPP_
#define RULEDECK_TESTS_SUPPORT_ORACLES_HPP_

#include <string>
#include <vector>

namespace ruledeck::testing {

// Exhaustive LCS: enumerates every subsequence of the shorter sequence and
// keeps the longest one that is also a subsequence of the other. Exponential;
// only usable for short sequences.
std::size_t lcs_brute_force(const std::vector<std::string>& a,
                            const std::vector<std::string>& b);

// Direct-counting BLEU written independently of the library implementation:
// consumable reference multisets for clipping and a pow-based geometric mean.
double bleu_oracle(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, int max_n);

}  // namespace ruledeck::testing

#endif  // RULEDECK_TESTS_SUPPORT_ORACLES_HPP_
