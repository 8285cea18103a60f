// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "ruledeck/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "ruledeck/ast.hpp"
#include "ruledeck/parser.hpp"

namespace ruledeck {

namespace {

std::vector<std::string> nl_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::map<std::string, int> term_counts(std::string_view text) {
  std::map<std::string, int> counts;
  for (std::string& token : nl_tokens(text)) ++counts[token];
  return counts;
}

// Merged bigram multiset of every statement in the code.
AstSignature deck_signature(std::string_view code, const CommandRegistry& registry,
                            bool* parsed_ok) {
  AstSignature merged;
  ParseResult parsed = parse_deck(code, registry);
  if (count_errors(parsed.diagnostics) > 0) {
    if (parsed_ok != nullptr) *parsed_ok = false;
    return merged;
  }
  if (parsed_ok != nullptr) *parsed_ok = true;
  for (const RuleAst& ast : lower(*parsed.deck)) {
    AstSignature sig = signature(ast);
    merged.bigrams.insert(merged.bigrams.end(), sig.bigrams.begin(), sig.bigrams.end());
  }
  std::sort(merged.bigrams.begin(), merged.bigrams.end());
  return merged;
}

}  // namespace

RetrievalIndex RetrievalIndex::build(std::vector<KnowledgeEntry> entries,
                                     const CommandRegistry& registry) {
  RetrievalIndex index;
  std::map<std::string, int> df;
  for (const KnowledgeEntry& entry : entries) {
    if (index.signatures_.count(entry.id) > 0)
      throw std::runtime_error("duplicate id " + entry.id);
    bool ok = false;
    AstSignature sig = deck_signature(entry.code, registry, &ok);
    if (!ok) {
      ParseResult parsed = parse_deck(entry.code, registry);
      throw std::runtime_error("entry " + entry.id + " failed to parse: " +
                               to_string(parsed.diagnostics.front()));
    }
    index.signatures_[entry.id] = std::move(sig);
    for (const auto& [term, count] : term_counts(entry.nl_text)) {
      (void)count;
      ++df[term];
    }
  }

  double n = static_cast<double>(entries.size());
  for (const auto& [term, count] : df)
    index.idf_[term] = std::log(1.0 + n / static_cast<double>(count));

  for (const KnowledgeEntry& entry : entries) {
    std::map<std::string, double> vec;
    double norm_sq = 0.0;
    for (const auto& [term, count] : term_counts(entry.nl_text)) {
      double weight = static_cast<double>(count) * index.idf_.at(term);
      vec[term] = weight;
      norm_sq += weight * weight;
    }
    index.norms_[entry.id] = std::sqrt(norm_sq);
    index.vectors_[entry.id] = std::move(vec);
  }
  index.entries_ = std::move(entries);
  return index;
}

const KnowledgeEntry* RetrievalIndex::find(const std::string& id) const {
  for (const KnowledgeEntry& entry : entries_)
    if (entry.id == id) return &entry;
  return nullptr;
}

std::map<std::string, double> RetrievalIndex::query_vector(std::string_view text) const {
  std::map<std::string, double> vec;
  for (const auto& [term, count] : term_counts(text)) {
    auto it = idf_.find(term);
    if (it == idf_.end()) continue;  // unseen terms match nothing
    vec[term] = static_cast<double>(count) * it->second;
  }
  return vec;
}

double RetrievalIndex::semantic_score(const std::map<std::string, double>& query_vector,
                                      const std::string& id) const {
  const auto& entry_vec = vectors_.at(id);
  double entry_norm = norms_.at(id);
  double query_norm_sq = 0.0;
  double dot = 0.0;
  for (const auto& [term, weight] : query_vector) {
    query_norm_sq += weight * weight;
    auto it = entry_vec.find(term);
    if (it != entry_vec.end()) dot += weight * it->second;
  }
  if (query_norm_sq == 0.0 || entry_norm == 0.0) return 0.0;
  double score = dot / (std::sqrt(query_norm_sq) * entry_norm);
  return std::clamp(score, 0.0, 1.0);
}

const AstSignature& RetrievalIndex::entry_signature(const std::string& id) const {
  return signatures_.at(id);
}

RetrievalResult retrieve(const RetrievalIndex& index, std::string_view nl_query,
                         const std::optional<std::string>& context_code,
                         const CommandRegistry& registry, std::size_t k, double alpha) {
  if (index.size() == 0) throw std::runtime_error("retrieval index is empty");
  RetrievalResult result;

  std::optional<AstSignature> context_sig;
  if (context_code) {
    bool ok = false;
    AstSignature sig = deck_signature(*context_code, registry, &ok);
    if (ok)
      context_sig = std::move(sig);
    else
      result.warnings.push_back(
          "context code failed to parse; using semantic scores only");
  }

  std::map<std::string, double> query = index.query_vector(nl_query);
  for (const KnowledgeEntry& entry : index.entries()) {
    RetrievalHit hit;
    hit.id = entry.id;
    hit.sem_score = index.semantic_score(query, entry.id);
    if (context_sig) {
      hit.struct_score = jaccard(*context_sig, index.entry_signature(entry.id));
      hit.combined = alpha * hit.sem_score + (1.0 - alpha) * hit.struct_score;
    } else {
      hit.struct_score = 0.0;
      hit.combined = hit.sem_score;  // no structural signal available
    }
    result.hits.push_back(std::move(hit));
  }

  std::sort(result.hits.begin(), result.hits.end(),
            [](const RetrievalHit& a, const RetrievalHit& b) {
              if (a.combined != b.combined) return a.combined > b.combined;
              return a.id < b.id;
            });
  if (result.hits.size() > k) result.hits.resize(k);
  return result;
}

std::string assemble_prompt(std::string_view nl_query,
                            const std::vector<RetrievalHit>& hits,
                            const RetrievalIndex& index,
                            const std::optional<std::string>& template_text) {
  static const char kDefaultTemplate[] =
      "{instruction}\n\n{exemplars}Description: {query}\nCode:";
  static const char kInstruction[] =
      "Translate each design-rule description into rule deck code, following "
      "the solved examples.";

  std::string exemplars;
  for (const RetrievalHit& hit : hits) {
    const KnowledgeEntry* entry = index.find(hit.id);
    if (entry == nullptr) continue;
    exemplars += "Description: " + entry->nl_text + "\n";
    exemplars += "Code: " + entry->code + "\n\n";
  }

  std::string prompt = template_text ? *template_text : kDefaultTemplate;
  auto replace_all = [&prompt](std::string_view placeholder, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = prompt.find(placeholder, pos)) != std::string::npos) {
      prompt.replace(pos, placeholder.size(), value);
      pos += value.size();
    }
  };
  replace_all("{instruction}", kInstruction);
  replace_all("{exemplars}", exemplars);
  replace_all("{query}", nl_query);
  return prompt;
}

std::vector<KnowledgeEntry> read_kb(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<KnowledgeEntry> entries;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    bool shaped = !doc.is_discarded() && doc.is_object() &&
                  doc.contains("id") && doc["id"].is_string() &&
                  doc.contains("nl") && doc["nl"].is_string() &&
                  doc.contains("code") && doc["code"].is_string();
    if (shaped && doc.contains("tags")) {
      shaped = doc["tags"].is_array();
      if (shaped)
        for (const auto& tag : doc["tags"]) shaped = shaped && tag.is_string();
    }
    if (!shaped)
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": malformed knowledge entry");
    KnowledgeEntry entry;
    entry.id = doc["id"].get<std::string>();
    entry.nl_text = doc["nl"].get<std::string>();
    entry.code = doc["code"].get<std::string>();
    if (doc.contains("tags"))
      for (const auto& tag : doc["tags"]) entry.intent_tags.insert(tag.get<std::string>());
    if (!seen.insert(entry.id).second)
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": duplicate id " + entry.id);
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace ruledeck
