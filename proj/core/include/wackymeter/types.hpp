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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wackymeter {

using TokenId = std::uint32_t;
using TokenSet = std::set<TokenId>;

// Dense id -> string mapping. Strings need not be unique.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  bool contains(TokenId id) const noexcept { return id < tokens_.size(); }
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  // First id carrying `text`, if any.
  std::optional<TokenId> find(std::string_view text) const;

 private:
  std::vector<std::string> tokens_;
};

// A query or document as produced by the model tokenizer.
struct TokenizedInput {
  std::string id;
  std::vector<TokenId> tokens;
  std::optional<std::string> raw_text;

  // Tokenizers can emit nothing for whitespace-only text; such inputs are
  // kept and flagged rather than rejected.
  bool degenerate() const noexcept { return tokens.empty(); }

  // Distinct token ids of `tokens`.
  TokenSet distinct_tokens() const;
};

struct TermWeight {
  TokenId token;
  double weight;

  friend bool operator==(const TermWeight&, const TermWeight&) = default;
};

// Vocabulary-space vector. Terms are sorted by ascending token id and every
// stored weight is strictly positive; absent tokens weigh zero.
struct SparseVector {
  std::string id;
  std::vector<TermWeight> terms;

  // Builds a vector from unordered (token, weight) pairs. Zero weights are
  // dropped; negative, non-finite or duplicated entries throw
  // ValidationError.
  static SparseVector from_terms(std::string id, std::vector<TermWeight> terms);

  double weight(TokenId token) const noexcept;
  bool contains(TokenId token) const noexcept;
  std::size_t size() const noexcept { return terms.size(); }
  bool empty() const noexcept { return terms.empty(); }
  TokenSet support() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

struct TokenRow {
  int position = 0;
  std::vector<TermWeight> weights;  // ascending token id, any sign

  friend bool operator==(const TokenRow&, const TokenRow&) = default;
};

// Per-position vocabulary rows of one input, either raw logits or
// post-activation values (the file header says which).
struct PerTokenMatrix {
  std::string id;
  std::vector<TokenRow> rows;  // strictly increasing positions
  std::optional<int> cls_position;

  const TokenRow* row_at(int position) const noexcept;

  friend bool operator==(const PerTokenMatrix&, const PerTokenMatrix&) =
      default;
};

// Graded relevance judgments, query id -> doc id -> grade.
class Qrels {
 public:
  void add(const std::string& query_id, const std::string& doc_id, int grade);

  // Judgments for one query, or nullptr when the query is unjudged.
  const std::map<std::string, int>* judgments(
      const std::string& query_id) const;
  int grade(const std::string& query_id, const std::string& doc_id) const;

  const std::map<std::string, std::map<std::string, int>>& all()
      const noexcept {
    return judgments_;
  }
  std::size_t query_count() const noexcept { return judgments_.size(); }

 private:
  std::map<std::string, std::map<std::string, int>> judgments_;
};

struct ScoredDoc {
  std::string doc_id;
  double score;

  friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

// Retrieval result for one query: scores non-increasing, ties by ascending
// doc id, no duplicate doc ids.
struct Ranking {
  std::string query_id;
  std::vector<ScoredDoc> entries;

  bool empty() const noexcept { return entries.empty(); }
  std::size_t size() const noexcept { return entries.size(); }

  friend bool operator==(const Ranking&, const Ranking&) = default;
};

// Strict ranking order: higher score first, then ascending doc id.
inline bool ranks_before(const ScoredDoc& a, const ScoredDoc& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.doc_id < b.doc_id;
}

// Sorts entries into ranking order and rejects duplicate doc ids.
void canonicalize(Ranking& ranking);

}  // namespace wackymeter
