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
#include <stdexcept>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wackymeter/errors.hpp"
#include "wackymeter/impact_index.hpp"

namespace wackymeter {
namespace {

using testing::vec;

std::vector<SparseVector> two_docs() {
  return {vec("d1", {{1, 2.0}, {3, 0.5}}), vec("d2", {{1, 1.0}})};
}

TEST(ImpactIndexTest, Transposition) {
  const auto index = ImpactIndex::build(two_docs());
  const auto& p1 = index.postings(1);
  ASSERT_EQ(p1.size(), 2u);
  EXPECT_EQ(index.doc_ids()[p1[0].doc], "d1");
  EXPECT_EQ(p1[0].weight, 2.0);
  EXPECT_EQ(index.doc_ids()[p1[1].doc], "d2");
  EXPECT_EQ(p1[1].weight, 1.0);
  ASSERT_EQ(index.postings(3).size(), 1u);
  EXPECT_EQ(index.postings(3)[0].weight, 0.5);
  EXPECT_TRUE(index.postings(2).empty());
  EXPECT_TRUE(index.postings(99).empty());
}

TEST(ImpactIndexTest, SingleTermQuery) {
  const auto r = ImpactIndex::build(two_docs()).search(vec("q", {{1, 1.0}}), 10);
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_EQ(r.entries[0], (ScoredDoc{"d1", 2.0}));
  EXPECT_EQ(r.entries[1], (ScoredDoc{"d2", 1.0}));
}

TEST(ImpactIndexTest, ZeroKIsRejected) {
  const auto index = ImpactIndex::build(two_docs());
  EXPECT_THROW(index.search(vec("q", {{1, 1.0}}), 0), std::invalid_argument);
  EXPECT_THROW(exhaustive_search(vec("q", {{1, 1.0}}), two_docs(), 0),
               std::invalid_argument);
}

TEST(ImpactIndexTest, EmptyQueryAndNoOverlap) {
  const auto index = ImpactIndex::build(two_docs());
  EXPECT_TRUE(index.search(vec("q", {}), 5).empty());
  EXPECT_TRUE(index.search(vec("q", {{7, 1.0}}), 5).empty());
}

TEST(ImpactIndexTest, TiesBreakByDocId) {
  const auto index = ImpactIndex::build(
      {vec("b", {{1, 1.0}}), vec("a", {{1, 1.0}}), vec("c", {{1, 1.0}})});
  const auto r = index.search(vec("q", {{1, 1.0}}), 2);
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_EQ(r.entries[0].doc_id, "a");
  EXPECT_EQ(r.entries[1].doc_id, "b");
}

TEST(ImpactIndexTest, MatchesExhaustiveAndOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    std::vector<SparseVector> docs;
    for (int d = 0; d < 300; ++d) {
      docs.push_back(testing::random_vector(rng, "d" + std::to_string(d), 200, 0.05));
    }
    const auto index = ImpactIndex::build(docs);
    for (int q = 0; q < 20; ++q) {
      const auto query = testing::random_vector(rng, "q", 200, 0.03);
      for (std::size_t k : {1u, 10u, 1000u}) {
        const auto got = index.search(query, k);
        EXPECT_EQ(got, exhaustive_search(query, docs, k));
        EXPECT_EQ(got, testing::oracle_search(query, docs, k));
      }
    }
  }
}

TEST(ImpactIndexTest, DuplicateDocumentIsInvalid) {
  EXPECT_THROW(ImpactIndex::build({vec("d", {{1, 1.0}}), vec("d", {{2, 1.0}})}),
               ValidationError);
}

TEST(ImpactIndexTest, SerializeRoundTripAndChecksum) {
  const auto model = testing::small_model(2, ExpansionProfile::random_token());
  const auto index = ImpactIndex::build(model.doc_vectors);
  const auto back = ImpactIndex::deserialize(index.serialize(), "idx");
  EXPECT_EQ(back.checksum(), index.checksum());
  for (const auto& q : model.query_vectors) EXPECT_EQ(back.search(q, 10), index.search(q, 10));
  auto bytes = index.serialize();
  bytes[0] = 'X';
  EXPECT_THROW(ImpactIndex::deserialize(bytes, "idx"), ParseError);
}

TEST(ImpactIndexTest, PostingLengths) {
  const auto lengths = ImpactIndex::build(two_docs()).posting_lengths();
  ASSERT_EQ(lengths.size(), 2u);
  EXPECT_EQ(lengths[0], (std::pair<TokenId, std::size_t>{1, 2}));
  EXPECT_EQ(lengths[1], (std::pair<TokenId, std::size_t>{3, 1}));
}

}  // namespace
}  // namespace wackymeter
