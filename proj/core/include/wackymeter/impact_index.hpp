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
#include <string>
#include <utility>
#include <vector>

#include "wackymeter/retriever.hpp"
#include "wackymeter/types.hpp"

namespace wackymeter {

struct ImpactPosting {
  std::uint32_t doc;  // position in doc_ids()
  double weight;      // > 0

  friend bool operator==(const ImpactPosting&, const ImpactPosting&) = default;
};

// Inverted index of sparse document vectors storing precomputed impacts.
//
// Documents are numbered in ascending doc-id order, so posting order and the
// ranking tie break coincide. Scores are inner products accumulated
// term-at-a-time in ascending token order, which makes them bit-identical to
// exhaustive_search().
class ImpactIndex {
 public:
  // Throws ValidationError on duplicate ids.
  static ImpactIndex build(const std::vector<SparseVector>& docs);

  // Top-k documents with a positive score; ties by ascending doc id. An
  // empty query yields an empty ranking. k must be >= 1.
  Ranking search(const SparseVector& query, std::size_t k) const;

  const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
  const std::vector<ImpactPosting>& postings(TokenId token) const noexcept;
  std::size_t posting_span() const noexcept { return postings_.size(); }

  // (token, posting length) for every token with a non-empty list.
  std::vector<std::pair<TokenId, std::size_t>> posting_lengths() const;

  // SHA-256 of the serialized form.
  std::string checksum() const;

  std::string serialize() const;
  static ImpactIndex deserialize(const std::string& bytes,
                                 const std::string& source);
  void save(const std::filesystem::path& path) const;
  static ImpactIndex load(const std::filesystem::path& path);

  friend bool operator==(const ImpactIndex&, const ImpactIndex&) = default;

 private:
  std::vector<std::string> doc_ids_;
  std::vector<std::vector<ImpactPosting>> postings_;
};

inline ImpactIndex build_impact_index(const std::vector<SparseVector>& docs) {
  return ImpactIndex::build(docs);
}

inline Ranking search(const SparseVector& query, const ImpactIndex& index,
                      std::size_t k) {
  return index.search(query, k);
}

// Reference scorer: intersects the query with every document vector
// directly. Same contract as ImpactIndex::search.
Ranking exhaustive_search(const SparseVector& query,
                          const std::vector<SparseVector>& docs, std::size_t k);

// Inner-product retrieval over an impact index.
class ImpactRetriever final : public Retriever {
 public:
  explicit ImpactRetriever(const ImpactIndex& index) : index_(index) {}
  Ranking search(const SparseVector& query, std::size_t k) const override {
    return index_.search(query, k);
  }
  std::string name() const override { return "impact"; }

 private:
  const ImpactIndex& index_;
};

}  // namespace wackymeter
