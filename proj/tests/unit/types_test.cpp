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
#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "wackymeter/errors.hpp"
#include "wackymeter/types.hpp"

namespace wackymeter {
namespace {

using testing::vec;

TEST(SparseVectorTest, FromTermsSortsAndDropsZeros) {
  auto v = SparseVector::from_terms("q", {{7, 0.0}, {5, 1.0}, {2, 1.5}});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v.terms[0].token, 2u);
  EXPECT_EQ(v.terms[1].token, 5u);
  EXPECT_DOUBLE_EQ(v.weight(2), 1.5);
  EXPECT_EQ(v.weight(7), 0.0);
  EXPECT_FALSE(v.contains(7));
  EXPECT_EQ(v.support(), (TokenSet{2, 5}));
}

TEST(SparseVectorTest, RejectsNegativeNonFiniteAndDuplicates) {
  EXPECT_THROW(SparseVector::from_terms("q", {{1, -0.1}}), ValidationError);
  EXPECT_THROW(SparseVector::from_terms("q", {{1, std::nan("")}}), ValidationError);
  EXPECT_THROW(SparseVector::from_terms("q", {{1, 1.0}, {1, 2.0}}), ValidationError);
}

TEST(TokenizedInputTest, DistinctTokensAndDegenerate) {
  auto in = testing::input("d", {3, 1, 3, 2});
  EXPECT_EQ(in.distinct_tokens(), (TokenSet{1, 2, 3}));
  EXPECT_FALSE(in.degenerate());
  EXPECT_TRUE(testing::input("e", {}).degenerate());
}

TEST(VocabularyTest, FindReturnsFirstId) {
  Vocabulary v({"[CLS]", "the", "the"});
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(v.find("the"), TokenId{1});
  EXPECT_FALSE(v.find("liver").has_value());
  EXPECT_TRUE(v.contains(2));
  EXPECT_FALSE(v.contains(3));
}

TEST(QrelsTest, GradesAndLookup) {
  Qrels q;
  q.add("q1", "d1", 2);
  q.add("q1", "d2", 0);
  EXPECT_EQ(q.grade("q1", "d1"), 2);
  EXPECT_EQ(q.grade("q1", "d9"), 0);
  EXPECT_EQ(q.grade("q9", "d1"), 0);
  EXPECT_EQ(q.judgments("q9"), nullptr);
  EXPECT_EQ(q.query_count(), 1u);
  EXPECT_THROW(q.add("q1", "d3", -1), ValidationError);
}

TEST(RankingTest, CanonicalizeOrdersTiesByDocId) {
  Ranking r{"q", {{"d3", 1.0}, {"d1", 2.0}, {"d2", 1.0}}};
  canonicalize(r);
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_EQ(r.entries[0].doc_id, "d1");
  EXPECT_EQ(r.entries[1].doc_id, "d2");
  EXPECT_EQ(r.entries[2].doc_id, "d3");
}

TEST(RankingTest, CanonicalizeRejectsDuplicates) {
  Ranking r{"q", {{"d1", 1.0}, {"d1", 0.5}}};
  EXPECT_THROW(canonicalize(r), ValidationError);
}

}  // namespace
}  // namespace wackymeter
