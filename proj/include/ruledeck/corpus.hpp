// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RULEDECK_CORPUS_HPP_
#define RULEDECK_CORPUS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ruledeck/registry.hpp"

namespace ruledeck {

enum class ComplexityClass { Simple, Moderate, Complex };
enum class SplitLabel { Train, Val, Test };

const char* to_string(ComplexityClass cls);
const char* to_string(SplitLabel split);
std::optional<ComplexityClass> complexity_from_string(std::string_view text);
std::optional<SplitLabel> split_from_string(std::string_view text);

struct CorpusExample {
  std::string id;
  std::string nl;
  std::string code;
  std::optional<ComplexityClass> complexity;
  std::optional<SplitLabel> split;
  nlohmann::json extra = nlohmann::json::object();  // unknown fields, preserved
};

// JSONL with one {id, nl, code, complexity?, split?} object per line. Reading
// reports malformed lines as "<path>: line N: ..." and rejects duplicate ids;
// unknown fields survive a read/write round trip.
std::vector<CorpusExample> read_corpus(const std::string& path);
void write_corpus(const std::vector<CorpusExample>& corpus, const std::string& path);
std::string corpus_to_jsonl(const std::vector<CorpusExample>& corpus);
std::vector<CorpusExample> corpus_from_jsonl(std::string_view text,
                                             const std::string& origin);

// Deterministic threshold rule over the parsed statements: Complex when a
// block nests a statement, an expression uses two or more boolean operators,
// three or more distinct layers are referenced, or a command carries three or
// more options; Simple when the deck is a single command touching at most two
// distinct layers with at most two options; Moderate otherwise. Locally
// defined layers do not count as references. Throws when the code fails to
// parse.
ComplexityClass classify_complexity(const CorpusExample& example,
                                    const CommandRegistry& registry);

struct SplitConfig {
  double train_ratio = 0.8;
  double val_ratio = 0.1;
  double test_ratio = 0.1;
  std::uint64_t seed = 0;
  bool valid() const;  // each ratio in (0,1), summing to 1 within 1e-9
};

// Assigns every example a split. Overall totals follow largest-remainder
// allocation of the ratios (ties resolved train, then val, then test); the
// same allocation runs per class and is then adjusted by +-1 cells, largest
// classes first, so the columns add up to the overall totals exactly.
// Membership within a class is a deterministic shuffle keyed by the seed and
// a stable hash of the id, so file order never matters. Examples must be
// classified; throws on an empty corpus or invalid ratios.
std::vector<CorpusExample> stratified_split(const std::vector<CorpusExample>& corpus,
                                            const SplitConfig& config);

struct DistributionRow {
  ComplexityClass cls = ComplexityClass::Simple;
  std::size_t count = 0;
  double percent = 0.0;  // one decimal; rows sum to 100.0 by largest remainder
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};

struct DistributionStats {
  std::vector<DistributionRow> rows;  // Simple, Moderate, Complex order
  std::size_t total = 0;
  std::size_t train_total = 0;
  std::size_t val_total = 0;
  std::size_t test_total = 0;
  bool has_splits = false;
};

// Requires complexity on every example; split columns appear only when every
// example carries a split.
DistributionStats distribution_stats(const std::vector<CorpusExample>& corpus);
std::string stats_table(const DistributionStats& stats);
std::string stats_json(const DistributionStats& stats);

}  // namespace ruledeck

#endif  // RULEDECK_CORPUS_HPP_
