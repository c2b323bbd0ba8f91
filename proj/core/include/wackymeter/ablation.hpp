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

// Query-side token-removal ablation.
//
// For each threshold N the N most wacky tokens are removed from every query
// vector and the run is re-evaluated. A baseline removes N tokens drawn
// uniformly from a pool, repeated with seeded draws, and reports mean and
// sample std. Original query tokens are protected in both arms. Two
// endpoints frame the results: the unmodified vectors and the vectors
// restricted to their original tokens.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wackymeter/impact_index.hpp"
#include "wackymeter/metrics.hpp"
#include "wackymeter/types.hpp"
#include "wackymeter/wackiness.hpp"

namespace wackymeter {

enum class RemovalPool { kExpansionObserved, kFullVocabulary };

RemovalPool parse_removal_pool(std::string_view text);
std::string to_string(RemovalPool pool);

struct AblationConfig {
  // Ascending and distinct; empty selects default_thresholds().
  std::vector<std::size_t> thresholds;
  std::size_t repeats = 10;
  std::uint64_t seed = 7;
  std::vector<Measure> measures = default_measures();
  RemovalPool removal_pool = RemovalPool::kExpansionObserved;
  std::size_t vocab_size = 0;  // required for kFullVocabulary
  TokenSet special_tokens;
  EvalOptions eval;
  unsigned threads = 1;
};

// {100, 1000, 10000} plus every larger power of ten up to scored_count.
std::vector<std::size_t> default_thresholds(std::size_t scored_count);

// Drops the entries of removal_set that are expansions of the record's
// input; original tokens always stay. Throws ValidationError when the ids
// differ.
SparseVector remove_tokens(const SparseVector& v, const ExpansionRecord& record,
                           const TokenSet& removal_set);

struct ThresholdResult {
  std::size_t threshold = 0;       // as requested
  std::size_t wacky_removed = 0;   // after clamping to the scored tokens
  std::size_t random_removed = 0;  // after clamping to the pool
  bool clamped = false;
  // Indexed like AblationReport::measures.
  std::vector<double> wacky;
  std::vector<double> random_mean;
  std::vector<double> random_std;
};

struct AblationReport {
  std::vector<Measure> measures;
  std::size_t repeats = 0;
  std::size_t pool_size = 0;
  std::vector<ThresholdResult> rows;
  std::vector<double> full;          // unmodified query vectors
  std::vector<double> no_expansion;  // query vectors restricted to t_orig
  std::string doc_index_checksum;
};

// Mean effectiveness of every measure for the given query vectors.
std::vector<double> evaluate_vectors(const std::vector<SparseVector>& query_vectors,
                                     const ImpactIndex& doc_index, const Qrels& qrels,
                                     const std::vector<Measure>& measures,
                                     const EvalOptions& options);

// Throws std::invalid_argument for repeats < 1, unsorted thresholds or a
// full-vocabulary pool without vocab_size, and ValidationError for queries
// without vectors. Results do not depend on cfg.threads.
AblationReport run_ablation(const std::vector<TokenizedInput>& queries,
                            const std::vector<SparseVector>& query_vectors,
                            const ImpactIndex& doc_index, const Qrels& qrels,
                            const TokenWackinessTable& table,
                            const AblationConfig& cfg);

struct BandCheck {
  std::size_t threshold = 0;
  std::size_t measure = 0;  // index into report.measures
  double lower = 0.0;
  double upper = 0.0;
  bool outside = false;     // wacky score outside [lower, upper]
};

// mean +/- 2 std of the random arm per threshold and measure.
std::vector<BandCheck> significance_band(const AblationReport& report);

// threshold,measure,wacky_score,random_mean,random_std,outside_band
void write_ablation_csv(std::ostream& out, const AblationReport& report);
// condition,measure,value
void write_endpoints_csv(std::ostream& out, const AblationReport& report);

}  // namespace wackymeter
