// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RULEDECK_RETRIEVAL_HPP_
#define RULEDECK_RETRIEVAL_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ruledeck/registry.hpp"
#include "ruledeck/signature.hpp"

namespace ruledeck {

// One verified description/code pair of the knowledge base.
struct KnowledgeEntry {
  std::string id;
  std::string nl_text;
  std::string code;
  std::set<std::string> intent_tags;
};

// Immutable retrieval index. The semantic side is a tf-idf vector space over
// lowercased NL tokens with idf = ln(1 + N/df); the structural side keeps one
// merged signature per entry (the bigram multisets of all its statements).
class RetrievalIndex {
 public:
  // Throws std::runtime_error on duplicate ids or code that fails to parse.
  static RetrievalIndex build(std::vector<KnowledgeEntry> entries,
                              const CommandRegistry& registry);

  std::size_t size() const { return entries_.size(); }
  const KnowledgeEntry* find(const std::string& id) const;
  const std::vector<KnowledgeEntry>& entries() const { return entries_; }

  // tf-idf cosine between the query text and an entry's NL text, in [0,1].
  double semantic_score(const std::map<std::string, double>& query_vector,
                        const std::string& id) const;
  std::map<std::string, double> query_vector(std::string_view text) const;
  const AstSignature& entry_signature(const std::string& id) const;

 private:
  std::vector<KnowledgeEntry> entries_;
  std::map<std::string, std::map<std::string, double>> vectors_;  // id -> term -> tfidf
  std::map<std::string, double> norms_;                           // id -> vector norm
  std::map<std::string, double> idf_;                             // term -> idf
  std::map<std::string, AstSignature> signatures_;                // id -> signature
};

struct RetrievalHit {
  std::string id;
  double sem_score = 0.0;
  double struct_score = 0.0;
  double combined = 0.0;
};

struct RetrievalResult {
  std::vector<RetrievalHit> hits;  // combined descending, ties by id ascending
  std::vector<std::string> warnings;
};

// Top-k retrieval with combined = alpha*sem + (1-alpha)*struct. Without a
// context, or when the context fails to parse (which adds a warning), the
// structural score is unavailable and combined falls back to the semantic
// score alone. Throws std::runtime_error on an empty index.
RetrievalResult retrieve(const RetrievalIndex& index, std::string_view nl_query,
                         const std::optional<std::string>& context_code,
                         const CommandRegistry& registry, std::size_t k = 3,
                         double alpha = 0.6);

// Fixed instruction, one "Description:/Code:" block per hit in hit order,
// then the query. A custom template replaces {instruction}, {exemplars}, and
// {query}.
std::string assemble_prompt(std::string_view nl_query,
                            const std::vector<RetrievalHit>& hits,
                            const RetrievalIndex& index,
                            const std::optional<std::string>& template_text);

// JSONL: {id, nl, code, tags?} per line. Throws with the line number on
// malformed lines and on duplicate ids.
std::vector<KnowledgeEntry> read_kb(const std::string& path);

}  // namespace ruledeck

#endif  // RULEDECK_RETRIEVAL_HPP_
