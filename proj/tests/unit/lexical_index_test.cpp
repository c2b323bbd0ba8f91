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
#include <numeric>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wackymeter/errors.hpp"
#include "wackymeter/lexical_index.hpp"

namespace wackymeter {
namespace {

using testing::input;

TEST(LexicalIndexTest, CountsAndLengths) {
  const auto index = LexicalIndex::build({input("d1", {1, 1, 2}), input("d2", {2})});
  const auto& s = index.stats();
  EXPECT_EQ(s.doc_count, 2u);
  EXPECT_EQ(s.df(1), 1u);
  EXPECT_EQ(s.df(2), 2u);
  EXPECT_EQ(s.df(9), 0u);
  EXPECT_EQ(index.doc_len(*index.find("d1")), 3u);
  EXPECT_EQ(index.doc_len(*index.find("d2")), 1u);
  EXPECT_EQ(index.count(1, *index.find("d1")), 2u);
  EXPECT_EQ(s.total_len, 4u);
}

TEST(LexicalIndexTest, RejectsEmptyAndDuplicates) {
  EXPECT_THROW(LexicalIndex::build({}), ValidationError);
  EXPECT_THROW(LexicalIndex::build({input("d1", {1}), input("d1", {2})}), ValidationError);
}

TEST(LexicalIndexTest, SerializeRoundTrip) {
  const auto model = testing::small_model(3, ExpansionProfile::mixed(0.5));
  const auto index = LexicalIndex::build(model.corpus);
  const auto back = LexicalIndex::deserialize(index.serialize(), "idx");
  EXPECT_EQ(back.serialize(), index.serialize());
  EXPECT_THROW(LexicalIndex::deserialize("garbage", "idx"), ParseError);
  auto bytes = index.serialize();
  bytes.pop_back();
  EXPECT_THROW(LexicalIndex::deserialize(bytes, "idx"), ParseError);
}

TEST(IdfTest, NaturalLog) {
  CollectionStats s;
  s.doc_count = 100;
  s.doc_freq = {0, 10};
  EXPECT_NEAR(*idf(1, s), std::log(10.0), 1e-12);
  EXPECT_FALSE(idf(0, s).has_value());
  EXPECT_FALSE(idf(5, s).has_value());
}

TEST(Bm25Test, MatchesBruteForce) {
  const auto model = testing::small_model(11, ExpansionProfile::lexical_overlap());
  const auto index = LexicalIndex::build(model.corpus);
  for (const auto& q : model.queries) {
    const auto got = bm25_search(q, index, 50);
    const auto want = testing::oracle_bm25(q.tokens, model.corpus, 50);
    ASSERT_EQ(got.entries.size(), want.entries.size());
    for (std::size_t i = 0; i < got.entries.size(); ++i) {
      EXPECT_EQ(got.entries[i].doc_id, want.entries[i].doc_id) << q.id << " rank " << i;
      EXPECT_NEAR(got.entries[i].score, want.entries[i].score, 1e-9);
    }
  }
}

TEST(Bm25Test, LargeKReturnsEveryDocument) {
  const auto index = LexicalIndex::build(
      {input("d1", {1}), input("d2", {2}), input("d3", {1, 3})});
  const auto r = bm25_search(input("q", {1}), index, 10);
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_EQ(r.entries[2].doc_id, "d2");
  EXPECT_EQ(r.entries[2].score, 0.0);
}

TEST(Bm25Test, WeightedQueryScalesContribution) {
  const auto index = LexicalIndex::build({input("d1", {1, 2}), input("d2", {2, 3})});
  const auto once = bm25_search(testing::vec("q", {{1, 1.0}}), index, 1);
  const auto twice = bm25_search(testing::vec("q", {{1, 2.0}}), index, 1);
  EXPECT_NEAR(twice.entries[0].score, 2.0 * once.entries[0].score, 1e-12);
}

TEST(Rm3Test, WeightsFormDistribution) {
  const auto model = testing::small_model(5, ExpansionProfile::lexical_overlap());
  const auto index = LexicalIndex::build(model.corpus);
  for (const auto& q : model.queries) {
    const auto v = rm3_expand(q, index, {});
    const double sum = std::accumulate(v.terms.begin(), v.terms.end(), 0.0,
                                       [](double a, const TermWeight& t) { return a + t.weight; });
    EXPECT_NEAR(sum, 1.0, 1e-9) << q.id;
  }
}

TEST(Rm3Test, OrigWeightOneKeepsQueryTokens) {
  const auto model = testing::small_model(5, ExpansionProfile::lexical_overlap());
  const auto index = LexicalIndex::build(model.corpus);
  Rm3Params p;
  p.orig_weight = 1.0;
  for (const auto& q : model.queries) {
    const auto v = rm3_expand(q, index, p);
    for (TokenId t : v.support()) EXPECT_TRUE(q.distinct_tokens().count(t));
  }
}

TEST(Rm3Test, BoundedFeedbackTerms) {
  const auto model = testing::small_model(5, ExpansionProfile::lexical_overlap());
  const auto index = LexicalIndex::build(model.corpus);
  Rm3Params p;
  p.fb_terms = 4;
  for (const auto& q : model.queries) {
    const auto orig = q.distinct_tokens();
    std::size_t extra = 0;
    for (TokenId t : rm3_expand(q, index, p).support()) extra += orig.count(t) ? 0 : 1;
    EXPECT_LE(extra, 4u);
  }
}

TEST(Rm3Test, EmptyQueryGivesEmptyVector) {
  const auto index = LexicalIndex::build({input("d1", {1})});
  EXPECT_TRUE(rm3_expand(input("q", {}), index, {}).empty());
}

}  // namespace
}  // namespace wackymeter
