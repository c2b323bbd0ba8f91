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
#include <string>
#include <vector>

#include "wackymeter/types.hpp"

namespace wackymeter {

// How the synthetic "model" picks expansion tokens.
//   lexical-overlap: tokens sampled from the token multisets of documents on
//                    the same topic as the input (grounded expansion).
//   random-token:    tokens sampled uniformly from the vocabulary.
//   mixed(p):        each expansion slot is random-token with probability p,
//                    lexical-overlap otherwise.
struct ExpansionProfile {
  double random_fraction = 0.0;

  static ExpansionProfile lexical_overlap() { return {0.0}; }
  static ExpansionProfile random_token() { return {1.0}; }
  static ExpansionProfile mixed(double p);

  // "lexical-overlap", "random-token" or "mixed(<p>)".
  static ExpansionProfile parse(const std::string& text);
  std::string name() const;
};

enum class ExpansionSource : std::uint8_t { kLexical, kRandom };

struct InjectedToken {
  TokenId token;
  ExpansionSource source;
};

// Ground truth of which expansion tokens the generator injected, and how.
struct InjectionLog {
  std::string input_id;
  std::vector<InjectedToken> tokens;
};

struct SyntheticModel {
  Vocabulary vocab;
  std::vector<TokenizedInput> corpus;
  std::vector<TokenizedInput> queries;
  std::vector<SparseVector> doc_vectors;
  std::vector<SparseVector> query_vectors;
  // Each query is sampled from one source document, judged grade 1.
  Qrels qrels;
  std::vector<InjectionLog> doc_injections;
  std::vector<InjectionLog> query_injections;
};

struct SyntheticConfig {
  std::size_t vocab_size = 2000;
  std::size_t corpus_size = 1000;
  std::size_t query_count = 100;
  ExpansionProfile profile;
  std::uint64_t seed = 7;
};

// Deterministic for a fixed config. Documents are drawn from per-topic token
// distributions so that nearest neighbours share vocabulary. Vocabulary,
// corpus, queries and qrels do not depend on the expansion profile; only the
// vectors and injection logs do. Weights are multiples of 1/8 so score ties
// are exact and frequent.
SyntheticModel generate_synthetic_model(const SyntheticConfig& config);

}  // namespace wackymeter
