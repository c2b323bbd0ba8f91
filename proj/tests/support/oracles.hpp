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

// Brute-force reference implementations. They share no code with the
// library beyond the plain data types and exist only to check it.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "wackymeter/types.hpp"

namespace wackymeter::testing {

// Dot product by map lookup, summing in ascending query token order.
double oracle_dot(const SparseVector& q, const SparseVector& d);

// Scores every document, keeps positive scores, sorts by score descending
// then doc id ascending.
Ranking oracle_search(const SparseVector& q, const std::vector<SparseVector>& docs,
                      std::size_t k);

// Okapi BM25 scored document by document straight from the token lists.
Ranking oracle_bm25(const std::vector<TokenId>& query,
                    const std::vector<TokenizedInput>& corpus, std::size_t k,
                    double k1 = 0.9, double b = 0.4);

struct OracleRow {
  std::size_t occurrences = 0;
  double mean = 0.0;
  double wackiness = 0.0;
};

// Wackiness table from exhaustive retrieval over doc_vectors and token
// counting over the raw corpus.
std::map<TokenId, OracleRow> oracle_wackiness(
    const std::vector<TokenizedInput>& inputs,
    const std::vector<SparseVector>& input_vectors,
    const std::vector<SparseVector>& doc_vectors,
    const std::vector<TokenizedInput>& corpus, std::size_t k,
    const std::vector<TokenId>& special_tokens = {});

// Dense evaluation over a |V|-length matrix.
double oracle_flops(const std::vector<SparseVector>& batch, std::size_t vocab_size);
double oracle_l1(const std::vector<SparseVector>& batch, std::size_t vocab_size);

// Bin means by assigning each rank r to the bin i with
// floor(i*M/B) <= r < floor((i+1)*M/B), scanning all bins.
std::vector<double> oracle_bins(std::vector<double> scores, std::size_t bins);

// Reference evaluator over a ranked doc-id list and the query's grades.
double oracle_mrr(const std::vector<std::string>& ranked,
                  const std::map<std::string, int>& grades, std::size_t k,
                  int threshold = 1);
double oracle_recall(const std::vector<std::string>& ranked,
                     const std::map<std::string, int>& grades, std::size_t k,
                     int threshold = 1);
double oracle_ndcg(const std::vector<std::string>& ranked,
                   const std::map<std::string, int>& grades, std::size_t k);

}  // namespace wackymeter::testing
