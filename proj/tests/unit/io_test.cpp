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
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "wackymeter/errors.hpp"
#include "wackymeter/io.hpp"

namespace wackymeter {
namespace {

Vocabulary vocab_from(const std::string& text) {
  std::istringstream in(text);
  return parse_vocabulary(in, "vocab");
}

TEST(VocabularyIoTest, ThreeLines) {
  const auto v = vocab_from("0\t[CLS]\n1\tthe\n2\tliver\n");
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(v.token(2), "liver");
  std::ostringstream out;
  write_vocabulary(out, v);
  EXPECT_EQ(out.str(), "0\t[CLS]\n1\tthe\n2\tliver\n");
}

TEST(VocabularyIoTest, GapInIdsIsInvalid) {
  EXPECT_THROW(vocab_from("0\ta\n2\tb\n"), ValidationError);
}

TEST(VocabularyIoTest, EmptyIsInvalid) {
  EXPECT_THROW(vocab_from(""), ValidationError);
}

TEST(VocabularyIoTest, MalformedLineIsParseError) {
  EXPECT_THROW(vocab_from("0 a\n"), ParseError);
  EXPECT_THROW(vocab_from("x\ta\n"), ParseError);
}

TEST(CorpusIoTest, OutOfRangeTokenIsInvalid) {
  const auto v = vocab_from("0\ta\n1\tb\n");
  std::istringstream in("{\"id\":\"d1\",\"tokens\":[0,5]}\n");
  EXPECT_THROW(parse_corpus(in, "corpus", &v), ValidationError);
}

TEST(CorpusIoTest, EmptyTokensAreDegenerate) {
  std::istringstream in("{\"id\":\"d1\",\"tokens\":[]}\n{\"id\":\"d2\",\"tokens\":[1]}\n");
  const auto docs = parse_corpus(in, "corpus", nullptr);
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_TRUE(docs[0].degenerate());
  EXPECT_FALSE(docs[1].degenerate());
}

TEST(CorpusIoTest, DuplicateIdIsInvalid) {
  std::istringstream in("{\"id\":\"d1\",\"tokens\":[1]}\n{\"id\":\"d1\",\"tokens\":[2]}\n");
  EXPECT_THROW(parse_corpus(in, "corpus", nullptr), ValidationError);
}

TEST(CorpusIoTest, SyntaxErrorReportsLine) {
  std::istringstream in("{\"id\":\"d1\",\"tokens\":[1]}\n{broken\n");
  try {
    parse_corpus(in, "corpus.jsonl", nullptr);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(VectorIoTest, PooledDropsZeroWeights) {
  std::istringstream in(
      "{\"format\":\"pooled\",\"activated\":true}\n"
      "{\"id\":\"q1\",\"weights\":{\"3\":0.0,\"1\":1.5}}\n");
  const auto file = parse_vectors(in, "vectors", nullptr);
  ASSERT_EQ(file.pooled.size(), 1u);
  EXPECT_EQ(file.pooled[0].support(), (TokenSet{1}));
}

TEST(VectorIoTest, ActivatedNegativeWeightIsInvalid) {
  std::istringstream in(
      "{\"format\":\"pooled\",\"activated\":true}\n"
      "{\"id\":\"q1\",\"weights\":{\"1\":-0.5}}\n");
  EXPECT_THROW(parse_vectors(in, "vectors", nullptr), ValidationError);
}

TEST(VectorIoTest, MissingHeaderIsParseError) {
  std::istringstream in("{\"id\":\"q1\",\"weights\":{\"1\":0.5}}\n");
  EXPECT_THROW(parse_vectors(in, "vectors", nullptr), Error);
}

TEST(VectorIoTest, CanonicalRoundTrip) {
  const std::string text =
      "{\"activated\":true,\"format\":\"pooled\"}\n"
      "{\"id\":\"q1\",\"weights\":{\"1\":1.5,\"10\":0.25}}\n";
  std::istringstream in(text);
  const auto file = parse_vectors(in, "vectors", nullptr);
  std::ostringstream out;
  write_vectors(out, file);
  EXPECT_EQ(out.str(), text);
}

TEST(VectorIoTest, PerTokenRoundTrip) {
  const std::string text =
      "{\"activated\":false,\"format\":\"per_token\"}\n"
      "{\"cls_pos\":0,\"id\":\"q1\",\"rows\":[{\"pos\":0,\"weights\":{\"1\":-2}},"
      "{\"pos\":1,\"weights\":{\"2\":0.5}}]}\n";
  std::istringstream in(text);
  const auto file = parse_vectors(in, "vectors", nullptr);
  ASSERT_EQ(file.per_token.size(), 1u);
  EXPECT_EQ(file.per_token[0].cls_position, 0);
  std::ostringstream out;
  write_vectors(out, file);
  EXPECT_EQ(out.str(), text);
}

TEST(QrelsIoTest, ParsesAndRejectsGarbage) {
  std::istringstream in("q1 0 d1 2\nq1 0 d2 0\n");
  const auto q = parse_qrels(in, "qrels");
  EXPECT_EQ(q.grade("q1", "d1"), 2);
  std::istringstream bad("q1 0 d1\n");
  EXPECT_THROW(parse_qrels(bad, "qrels"), ParseError);
}

TEST(RunIoTest, RoundTripCanonical) {
  std::istringstream in("q1 Q0 d2 1 3 t\nq1 Q0 d1 2 1.5 t\nq2 Q0 d9 1 0.5 t\n");
  const auto run = parse_run(in, "run");
  ASSERT_EQ(run.size(), 2u);
  EXPECT_EQ(run[0].query_id, "q1");
  EXPECT_EQ(run[0].entries[0].doc_id, "d2");
  std::ostringstream out;
  write_run(out, run, "t");
  EXPECT_EQ(out.str(), "q1 Q0 d2 1 3 t\nq1 Q0 d1 2 1.5 t\nq2 Q0 d9 1 0.5 t\n");
}

TEST(FileIoTest, MissingFileIsIoError) {
  EXPECT_THROW(read_file("/nonexistent/wackymeter/x"), IoError);
}

}  // namespace
}  // namespace wackymeter
