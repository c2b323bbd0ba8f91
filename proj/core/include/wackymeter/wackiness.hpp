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

// Token wackiness.
//
// For every input x (a query, or a document treated as a query):
//   1. expansion   T_exp = support(v_x) \ T_orig
//   2. retrieval   D_x = top-k documents for v_x under the model's own
//                  ranking function
//   3. importance  S(t, x) = (sum_{d in D_x} count(t, d) /
//                             sum_{d in D_x} len(d)) * ln(N / df(t))
//                  for every t in T_exp
//   4. averaging   mean_t = average of S(t, x) over the inputs X_t that
//                  expanded t, min-max normalized across tokens, and
//                  wackiness(t) = 1 - normalized mean_t.
//
// Tokens that never appear as an expansion have no score and are absent
// from the table.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wackymeter/lexical_index.hpp"
#include "wackymeter/retriever.hpp"
#include "wackymeter/types.hpp"

namespace wackymeter {

struct ExpansionRecord {
  std::string input_id;
  TokenSet t_orig;   // distinct input tokens minus special tokens
  TokenSet t_model;  // support of the input's vector
  TokenSet t_exp;    // t_model \ t_orig
};

// Special tokens (e.g. [CLS]) are never counted as original, so the model
// activating them registers as expansion. Throws ValidationError when the
// ids of input and vector differ.
ExpansionRecord expansion_set(const TokenizedInput& input, const SparseVector& v,
                              const TokenSet& special_tokens = {});

// S(t, x) over the documents of `ranked_docs`. Zero when t does not occur
// in them (the idf is then never evaluated) or when they are all empty.
// Throws std::invalid_argument for an empty ranking and ValidationError
// for a document missing from `lexicon`.
double lexical_importance(TokenId token, const Ranking& ranked_docs,
                          const LexicalIndex& lexicon);

struct ImportanceSample {
  TokenId token;
  double value;  // S(t, x)
};

// Samples of one input, ascending token id.
struct InputImportance {
  std::string input_id;
  bool retrieved = false;  // false: empty ranking, no samples
  std::vector<ImportanceSample> samples;
};

// Raw per-input samples of one model. Tables are reductions of this, which
// lets resampling reuse a single pass of retrieval.
struct WackinessRun {
  std::vector<InputImportance> inputs;  // input order
  std::size_t empty_rankings = 0;
};

struct WackinessRow {
  std::size_t occurrences = 0;  // |X_t| >= 1
  double mean_importance = 0.0;
  double wackiness = 0.0;       // in [0, 1]
};

struct TokenWackinessTable {
  std::map<TokenId, WackinessRow> rows;
  double norm_min = 0.0;
  double norm_max = 0.0;
  std::size_t empty_rankings = 0;

  std::size_t scored_count() const noexcept { return rows.size(); }
  // (token, wackiness), wackiness descending, ties by ascending token id.
  std::vector<std::pair<TokenId, double>> ranked() const;
};

struct WackinessOptions {
  std::size_t k = 10;
  TokenSet special_tokens;
  // Drop the input itself from its own neighbourhood (document inputs).
  bool exclude_self = false;
  unsigned threads = 1;
};

// Steps 1-3 for every input. Inputs and vectors are matched by id; an input
// without a vector throws ValidationError. Results do not depend on
// options.threads.
WackinessRun collect_importance(const std::vector<TokenizedInput>& inputs,
                                const std::vector<SparseVector>& vectors,
                                const Retriever& retriever,
                                const LexicalIndex& lexicon,
                                const WackinessOptions& options);

// Step 4 over all inputs of the run.
TokenWackinessTable build_table(const WackinessRun& run);

// Step 4 over a multiset of inputs (indices into run.inputs, repeats
// allowed). Sums run in the given order.
TokenWackinessTable build_table(const WackinessRun& run,
                                const std::vector<std::size_t>& selection);

// The full pipeline.
TokenWackinessTable wackiness_scores(const std::vector<TokenizedInput>& inputs,
                                     const std::vector<SparseVector>& vectors,
                                     const Retriever& retriever,
                                     const LexicalIndex& lexicon,
                                     const WackinessOptions& options);

// Expansion records of every input, matched by id as above.
std::vector<ExpansionRecord> expansion_records(
    const std::vector<TokenizedInput>& inputs,
    const std::vector<SparseVector>& vectors, const TokenSet& special_tokens);

struct WackyToken {
  TokenId token;
  std::string text;
  double wackiness;
};

// The n most wacky tokens, ties by ascending token id.
std::vector<WackyToken> top_wacky_report(const TokenWackinessTable& table,
                                         const Vocabulary& vocab, std::size_t n);

// token_id,token_string,occurrences,mean_importance,wackiness sorted by
// wackiness descending.
void write_table_csv(std::ostream& out, const TokenWackinessTable& table,
                     const Vocabulary& vocab);
void write_report_csv(std::ostream& out, const std::vector<WackyToken>& report);

// Importance samples as JSONL: a header {"format": "importance", ...extra}
// then one {"id": str, "retrieved": bool, "samples": {"<tid>": float}} per
// input. Reals are written in shortest round-trip form, so a loaded run
// rebuilds the original table exactly.
void write_importance(std::ostream& out, const WackinessRun& run,
                      const std::map<std::string, std::string>& extra = {});
WackinessRun parse_importance(std::istream& in, const std::string& source);
WackinessRun load_importance(const std::filesystem::path& path);

}  // namespace wackymeter
