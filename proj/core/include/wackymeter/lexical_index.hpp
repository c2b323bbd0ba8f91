// Copyright 2026-present the wackymeter project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wackymeter/retriever.hpp"
#include "wackymeter/types.hpp"

namespace wackymeter {

using DocIndex = std::uint32_t;

struct TermCount {
  TokenId token;
  std::uint32_t count;

  friend bool operator==(const TermCount&, const TermCount&) = default;
};

struct Posting {
  DocIndex doc;
  std::uint32_t tf;

  friend bool operator==(const Posting&, const Posting&) = default;
};

// Collection statistics over the model-vocabulary tokenization.
struct CollectionStats {
  std::size_t doc_count = 0;                 // N
  std::vector<std::uint32_t> doc_freq;       // by token id; absent ids are 0
  std::vector<std::uint32_t> doc_len;        // by DocIndex
  std::uint64_t total_len = 0;

  std::uint32_t df(TokenId token) const noexcept {
    return token < doc_freq.size() ? doc_freq[token] : 0;
  }
  double avg_len() const noexcept {
    return doc_count == 0 ? 0.0
                          : static_cast<double>(total_len) /
                                static_cast<double>(doc_count);
  }
};

// Term-frequency index of a tokenized corpus. Documents are numbered in
// ascending doc-id order; postings are sorted by that number.
class LexicalIndex {
 public:
  // Throws ValidationError on an empty corpus or duplicate doc ids.
  static LexicalIndex build(const std::vector<TokenizedInput>& corpus);

  const CollectionStats& stats() const noexcept { return stats_; }
  std::size_t doc_count() const noexcept { return doc_ids_.size(); }
  const std::string& doc_id(DocIndex doc) const { return doc_ids_.at(doc); }
  std::optional<DocIndex> find(const std::string& doc_id) const;

  // Postings of one token (empty span for unseen tokens).
  const std::vector<Posting>& postings(TokenId token) const noexcept;
  // Term counts of one document, ascending token id.
  const std::vector<TermCount>& doc_terms(DocIndex doc) const {
    return forward_.at(doc);
  }
  std::uint32_t count(TokenId token, DocIndex doc) const;
  std::uint32_t doc_len(DocIndex doc) const { return stats_.doc_len.at(doc); }

  // Versioned binary persistence.
  void save(const std::filesystem::path& path) const;
  static LexicalIndex load(const std::filesystem::path& path);
  std::string serialize() const;
  static LexicalIndex deserialize(const std::string& bytes,
                                  const std::string& source);

 private:
  void finalize();

  std::vector<std::string> doc_ids_;
  std::unordered_map<std::string, DocIndex> by_id_;
  std::vector<std::vector<TermCount>> forward_;
  std::vector<std::vector<Posting>> postings_;
  CollectionStats stats_;
};

// Free-function form of the index constructor.
LexicalIndex build_lexical_index(const std::vector<TokenizedInput>& corpus);

// ln(N / df). Undefined (nullopt) when df = 0; callers must short-circuit
// before multiplying.
std::optional<double> idf(TokenId token, const CollectionStats& stats);

struct Bm25Params {
  double k1 = 0.9;
  double b = 0.4;
};

// Okapi BM25 with the non-negative idf ln(1 + (N - df + 0.5) / (df + 0.5)).
// Every document is ranked, including zero scores. Query weights multiply
// the per-term contribution (term counts for a tokenized query). Terms are
// summed in ascending token order.
Ranking bm25_search(const TokenizedInput& query, const LexicalIndex& index,
                    std::size_t k, Bm25Params params = {});
Ranking bm25_search(const SparseVector& query, const LexicalIndex& index,
                    std::size_t k, Bm25Params params = {});

// BM25 over a lexical index, for weighted (e.g. RM3-expanded) queries.
class Bm25Retriever final : public Retriever {
 public:
  Bm25Retriever(const LexicalIndex& index, Bm25Params params = {})
      : index_(index), params_(params) {}
  Ranking search(const SparseVector& query, std::size_t k) const override;
  std::string name() const override { return "bm25"; }

 private:
  const LexicalIndex& index_;
  Bm25Params params_;
};

struct Rm3Params {
  std::size_t fb_docs = 10;
  std::size_t fb_terms = 10;
  double orig_weight = 0.5;
  Bm25Params bm25;
};

// RM3 pseudo-relevance feedback.
//
// Feedback documents are the top fb_docs BM25 results with a positive score.
// Their scores become a distribution by shifting the minimum to zero and
// dividing by the sum (uniform when all scores are equal). The relevance
// model is P(t|R) = sum_d w_d * tf(t,d) / len(d), truncated to its fb_terms
// heaviest terms (ties by ascending token) and renormalized. The result is
//   orig_weight * P(t|q) + (1 - orig_weight) * P(t|R),
// with P(t|q) the normalized query term counts. The output sums to one;
// with no feedback documents it is P(t|q) alone. An empty query yields an
// empty vector.
SparseVector rm3_expand(const TokenizedInput& query, const LexicalIndex& index,
                        const Rm3Params& params);

}  // namespace wackymeter
