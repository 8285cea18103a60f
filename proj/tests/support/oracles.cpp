// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ruledeck::testing {

namespace {

bool is_subsequence(const std::vector<std::string>& needle,
                    const std::vector<std::string>& haystack) {
  std::size_t pos = 0;
  for (const std::string& token : haystack) {
    if (pos < needle.size() && needle[pos] == token) ++pos;
  }
  return pos == needle.size();
}

}  // namespace

std::size_t lcs_brute_force(const std::vector<std::string>& a,
                            const std::vector<std::string>& b) {
  const std::vector<std::string>& small = a.size() <= b.size() ? a : b;
  const std::vector<std::string>& large = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << small.size()); ++mask) {
    std::vector<std::string> subseq;
    for (std::size_t i = 0; i < small.size(); ++i)
      if (mask & (std::size_t{1} << i)) subseq.push_back(small[i]);
    if (subseq.size() > best && is_subsequence(subseq, large))
      best = subseq.size();
  }
  return best;
}

double bleu_oracle(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, int max_n) {
  if (candidate.empty() || reference.empty()) return 0.0;
  int c = static_cast<int>(candidate.size());
  int r = static_cast<int>(reference.size());
  int n_max = std::min(max_n, c);

  double product = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    // Consume reference n-grams one candidate n-gram at a time.
    std::map<std::vector<std::string>, int> available;
    for (std::size_t i = 0; i + n <= reference.size(); ++i)
      ++available[std::vector<std::string>(reference.begin() + i,
                                           reference.begin() + i + n)];
    int matched = 0;
    int total = 0;
    for (std::size_t i = 0; i + n <= candidate.size(); ++i) {
      ++total;
      std::vector<std::string> gram(candidate.begin() + i, candidate.begin() + i + n);
      auto it = available.find(gram);
      if (it != available.end() && it->second > 0) {
        --it->second;
        ++matched;
      }
    }
    double p = matched > 0 ? static_cast<double>(matched) / total
                           : 1.0 / (2.0 * static_cast<double>(total));
    product *= std::pow(p, 1.0 / static_cast<double>(n_max));
  }
  double bp = c > r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / c);
  return bp * product;
}

}  // namespace ruledeck::testing
