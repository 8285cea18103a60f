// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "ruledeck/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ruledeck/ast.hpp"
#include "ruledeck/parser.hpp"

namespace ruledeck {

namespace {

constexpr const char* kKnownFields[] = {"id", "nl", "code", "complexity", "split"};

bool is_known_field(const std::string& key) {
  for (const char* field : kKnownFields)
    if (key == field) return true;
  return false;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t hash = 0xcbf29ce484222325ull) {
  for (char c : data) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

// Largest-remainder allocation of `total` into three parts; ties go to the
// earlier part (train before val before test).
std::array<std::size_t, 3> largest_remainder(std::size_t total,
                                             const std::array<double, 3>& ratios) {
  std::array<std::size_t, 3> alloc{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    double quota = static_cast<double>(total) * ratios[i];
    alloc[i] = static_cast<std::size_t>(std::floor(quota));
    remainder[i] = quota - std::floor(quota);
    assigned += alloc[i];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&remainder](std::size_t a, std::size_t b) {
                     return remainder[a] > remainder[b];
                   });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++alloc[order[i % 3]];
  return alloc;
}

void count_expr(const LayerExprNode& expr, std::set<std::string>& refs, int& ops) {
  if (expr.kind == LayerExprNode::Kind::Leaf) {
    refs.insert(expr.layer);
    return;
  }
  ++ops;
  for (const LayerExprNode& child : expr.children) count_expr(child, refs, ops);
}

std::string format_percent(double percent) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(1);
  out << percent;
  return out.str();
}

void append_cell(std::string& line, const std::string& text, std::size_t width) {
  line += text;
  for (std::size_t i = text.size(); i < width + 2; ++i) line += ' ';
}

void push_row(std::string& out, const std::string& line) {
  std::size_t end = line.find_last_not_of(' ');
  out.append(line, 0, end == std::string::npos ? 0 : end + 1);
  out += '\n';
}

}  // namespace

const char* to_string(ComplexityClass cls) {
  switch (cls) {
    case ComplexityClass::Simple: return "Simple";
    case ComplexityClass::Moderate: return "Moderate";
    case ComplexityClass::Complex: return "Complex";
  }
  return "unknown";
}

const char* to_string(SplitLabel split) {
  switch (split) {
    case SplitLabel::Train: return "train";
    case SplitLabel::Val: return "val";
    case SplitLabel::Test: return "test";
  }
  return "unknown";
}

std::optional<ComplexityClass> complexity_from_string(std::string_view text) {
  if (text == "Simple") return ComplexityClass::Simple;
  if (text == "Moderate") return ComplexityClass::Moderate;
  if (text == "Complex") return ComplexityClass::Complex;
  return std::nullopt;
}

std::optional<SplitLabel> split_from_string(std::string_view text) {
  if (text == "train") return SplitLabel::Train;
  if (text == "val") return SplitLabel::Val;
  if (text == "test") return SplitLabel::Test;
  return std::nullopt;
}

std::vector<CorpusExample> corpus_from_jsonl(std::string_view text,
                                             const std::string& origin) {
  std::vector<CorpusExample> corpus;
  std::set<std::string> seen;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (line.empty()) {
      if (start > text.size()) break;
      continue;
    }
    auto fail = [&origin, lineno](const std::string& what) -> std::runtime_error {
      return std::runtime_error(origin + ": line " + std::to_string(lineno) + ": " + what);
    };
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw fail("malformed JSON");
    for (const char* field : {"id", "nl", "code"})
      if (!doc.contains(field) || !doc[field].is_string())
        throw fail(std::string("missing or non-string field ") + field);
    CorpusExample example;
    example.id = doc["id"].get<std::string>();
    example.nl = doc["nl"].get<std::string>();
    example.code = doc["code"].get<std::string>();
    if (doc.contains("complexity")) {
      if (!doc["complexity"].is_string()) throw fail("non-string complexity");
      example.complexity = complexity_from_string(doc["complexity"].get<std::string>());
      if (!example.complexity)
        throw fail("unknown complexity " + doc["complexity"].get<std::string>());
    }
    if (doc.contains("split")) {
      if (!doc["split"].is_string()) throw fail("non-string split");
      example.split = split_from_string(doc["split"].get<std::string>());
      if (!example.split) throw fail("unknown split " + doc["split"].get<std::string>());
    }
    for (const auto& [key, value] : doc.items())
      if (!is_known_field(key)) example.extra[key] = value;
    if (!seen.insert(example.id).second) throw fail("duplicate id " + example.id);
    corpus.push_back(std::move(example));
  }
  return corpus;
}

std::vector<CorpusExample> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return corpus_from_jsonl(buffer.str(), path);
}

std::string corpus_to_jsonl(const std::vector<CorpusExample>& corpus) {
  std::string out;
  for (const CorpusExample& example : corpus) {
    nlohmann::json doc = example.extra.is_object() ? example.extra
                                                   : nlohmann::json::object();
    doc["id"] = example.id;
    doc["nl"] = example.nl;
    doc["code"] = example.code;
    if (example.complexity) doc["complexity"] = to_string(*example.complexity);
    if (example.split) doc["split"] = to_string(*example.split);
    out += doc.dump();
    out += "\n";
  }
  return out;
}

void write_corpus(const std::vector<CorpusExample>& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << corpus_to_jsonl(corpus);
}

ComplexityClass classify_complexity(const CorpusExample& example,
                                    const CommandRegistry& registry) {
  ParseResult parsed = parse_deck(example.code, registry);
  if (count_errors(parsed.diagnostics) > 0)
    throw std::runtime_error("example " + example.id + " failed to parse: " +
                             to_string(parsed.diagnostics.front()));
  std::vector<RuleAst> statements = lower(*parsed.deck);

  bool nested = statements.size() > parsed.deck->children.size();
  int max_bool_ops = 0;
  std::size_t command_count = 0;
  std::size_t max_options = 0;
  std::set<std::string> referenced;
  std::set<std::string> defined;
  for (const RuleAst& ast : statements) {
    if (const auto* cmd = std::get_if<CommandNode>(&ast)) {
      ++command_count;
      max_options = std::max(max_options, cmd->options.size());
      referenced.insert(cmd->layers.begin(), cmd->layers.end());
    } else {
      const auto& def = std::get<LayerDefNode>(ast);
      defined.insert(def.target);
      int ops = 0;
      count_expr(def.expr, referenced, ops);
      max_bool_ops = std::max(max_bool_ops, ops);
    }
  }
  std::size_t distinct_refs = 0;
  for (const std::string& layer : referenced)
    if (defined.count(layer) == 0) ++distinct_refs;

  if (nested || max_bool_ops >= 2 || distinct_refs >= 3 || max_options >= 3)
    return ComplexityClass::Complex;
  if (command_count == 1 && distinct_refs <= 2 && max_options <= 2)
    return ComplexityClass::Simple;
  return ComplexityClass::Moderate;
}

bool SplitConfig::valid() const {
  auto in_range = [](double r) { return r > 0.0 && r < 1.0; };
  return in_range(train_ratio) && in_range(val_ratio) && in_range(test_ratio) &&
         std::abs(train_ratio + val_ratio + test_ratio - 1.0) <= 1e-9;
}

std::vector<CorpusExample> stratified_split(const std::vector<CorpusExample>& corpus,
                                            const SplitConfig& config) {
  if (!config.valid())
    throw std::runtime_error("split ratios must lie in (0,1) and sum to 1");
  if (corpus.empty()) throw std::runtime_error("cannot split an empty corpus");
  for (const CorpusExample& example : corpus)
    if (!example.complexity)
      throw std::runtime_error("example " + example.id + " has no complexity class");

  const std::array<double, 3> ratios = {config.train_ratio, config.val_ratio,
                                        config.test_ratio};
  std::array<std::size_t, 3> grand = largest_remainder(corpus.size(), ratios);

  std::array<std::vector<std::size_t>, 3> members;  // indices into corpus, per class
  for (std::size_t i = 0; i < corpus.size(); ++i)
    members[static_cast<std::size_t>(*corpus[i].complexity)].push_back(i);

  std::array<std::array<std::size_t, 3>, 3> cells{};  // [class][split]
  for (std::size_t c = 0; c < 3; ++c)
    cells[c] = largest_remainder(members[c].size(), ratios);

  // Nudge per-class cells so each split column sums to its grand total,
  // moving one example at a time inside the largest eligible class.
  auto column_sum = [&cells](std::size_t split) {
    return cells[0][split] + cells[1][split] + cells[2][split];
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t over = 0; over < 3; ++over) {
      if (column_sum(over) <= grand[over]) continue;
      for (std::size_t under = 0; under < 3; ++under) {
        if (column_sum(under) >= grand[under]) continue;
        std::size_t best = 3;
        for (std::size_t c = 0; c < 3; ++c)
          if (cells[c][over] > 0 &&
              (best == 3 || members[c].size() > members[best].size()))
            best = c;
        if (best == 3) continue;
        --cells[best][over];
        ++cells[best][under];
        changed = true;
        break;
      }
    }
  }

  std::vector<CorpusExample> result = corpus;
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<std::size_t>& indices = members[c];
    std::string seed_prefix = std::to_string(config.seed) + "\x1f";
    std::sort(indices.begin(), indices.end(),
              [&corpus, &seed_prefix](std::size_t a, std::size_t b) {
                std::uint64_t ha = fnv1a64(seed_prefix + corpus[a].id);
                std::uint64_t hb = fnv1a64(seed_prefix + corpus[b].id);
                if (ha != hb) return ha < hb;
                return corpus[a].id < corpus[b].id;
              });
    std::size_t cursor = 0;
    for (std::size_t split = 0; split < 3; ++split)
      for (std::size_t i = 0; i < cells[c][split]; ++i, ++cursor)
        result[indices[cursor]].split = static_cast<SplitLabel>(split);
  }
  return result;
}

DistributionStats distribution_stats(const std::vector<CorpusExample>& corpus) {
  DistributionStats stats;
  stats.total = corpus.size();
  if (corpus.empty()) return stats;

  std::array<std::size_t, 3> counts{};
  std::array<std::array<std::size_t, 3>, 3> splits{};  // [class][split]
  stats.has_splits = true;
  for (const CorpusExample& example : corpus) {
    if (!example.complexity)
      throw std::runtime_error("example " + example.id + " has no complexity class");
    std::size_t c = static_cast<std::size_t>(*example.complexity);
    ++counts[c];
    if (example.split)
      ++splits[c][static_cast<std::size_t>(*example.split)];
    else
      stats.has_splits = false;
  }

  // Percentages in tenths by largest remainder, so the column sums to 100.0.
  std::vector<std::size_t> present;
  for (std::size_t c = 0; c < 3; ++c)
    if (counts[c] > 0) present.push_back(c);
  std::vector<std::size_t> tenths(present.size(), 0);
  std::vector<double> remainders(present.size(), 0.0);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < present.size(); ++i) {
    double quota = 1000.0 * static_cast<double>(counts[present[i]]) /
                   static_cast<double>(stats.total);
    tenths[i] = static_cast<std::size_t>(std::floor(quota));
    remainders[i] = quota - std::floor(quota);
    assigned += tenths[i];
  }
  std::vector<std::size_t> order(present.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&remainders](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b];
  });
  for (std::size_t i = 0; assigned < 1000; ++i, ++assigned) ++tenths[order[i % order.size()]];

  for (std::size_t i = 0; i < present.size(); ++i) {
    std::size_t c = present[i];
    DistributionRow row;
    row.cls = static_cast<ComplexityClass>(c);
    row.count = counts[c];
    row.percent = static_cast<double>(tenths[i]) / 10.0;
    if (stats.has_splits) {
      row.train = splits[c][0];
      row.val = splits[c][1];
      row.test = splits[c][2];
      stats.train_total += row.train;
      stats.val_total += row.val;
      stats.test_total += row.test;
    }
    stats.rows.push_back(row);
  }
  return stats;
}

std::string stats_table(const DistributionStats& stats) {
  const std::size_t width = 10;
  std::string out;
  std::string header;
  append_cell(header, "Class", width);
  append_cell(header, "Count", width);
  append_cell(header, "Percent", width);
  if (stats.has_splits) {
    append_cell(header, "Train", width);
    append_cell(header, "Val", width);
    append_cell(header, "Test", width);
  }
  push_row(out, header);
  for (const DistributionRow& row : stats.rows) {
    std::string line;
    append_cell(line, to_string(row.cls), width);
    append_cell(line, std::to_string(row.count), width);
    append_cell(line, format_percent(row.percent), width);
    if (stats.has_splits) {
      append_cell(line, std::to_string(row.train), width);
      append_cell(line, std::to_string(row.val), width);
      append_cell(line, std::to_string(row.test), width);
    }
    push_row(out, line);
  }
  std::string total;
  append_cell(total, "Total", width);
  append_cell(total, std::to_string(stats.total), width);
  append_cell(total, stats.total > 0 ? "100.0" : "0.0", width);
  if (stats.has_splits) {
    append_cell(total, std::to_string(stats.train_total), width);
    append_cell(total, std::to_string(stats.val_total), width);
    append_cell(total, std::to_string(stats.test_total), width);
  }
  push_row(out, total);
  return out;
}

std::string stats_json(const DistributionStats& stats) {
  nlohmann::json doc;
  doc["total"] = stats.total;
  doc["classes"] = nlohmann::json::array();
  for (const DistributionRow& row : stats.rows) {
    nlohmann::json entry = {{"class", to_string(row.cls)},
                            {"count", row.count},
                            {"percent", row.percent}};
    if (stats.has_splits) {
      entry["train"] = row.train;
      entry["val"] = row.val;
      entry["test"] = row.test;
    }
    doc["classes"].push_back(entry);
  }
  if (stats.has_splits)
    doc["splits"] = {{"train", stats.train_total},
                     {"val", stats.val_total},
                     {"test", stats.test_total}};
  return doc.dump(2);
}

}  // namespace ruledeck
