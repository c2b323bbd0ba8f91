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

// Ranking effectiveness: MRR@k, Recall@k and NDCG@k.
//
// A query is evaluated when it appears in the run and the qrels judge it
// usefully: at least one document at or above the relevance threshold for
// MRR and Recall, at least one positive grade for NDCG. Other run queries
// are reported in EvalResult::excluded. Only the order of each ranking's
// entries matters, never the score values.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wackymeter/types.hpp"

namespace wackymeter {

enum class MeasureKind { kMrr, kRecall, kNdcg };

struct Measure {
  MeasureKind kind = MeasureKind::kMrr;
  std::size_t k = 10;

  // "MRR@10", "Recall@1000", "NDCG@10"; names are case-insensitive.
  // Throws std::invalid_argument.
  static Measure parse(std::string_view text);
  std::string name() const;

  friend bool operator==(const Measure&, const Measure&) = default;
};

// MRR@10, Recall@10, Recall@100, Recall@1000, NDCG@10.
std::vector<Measure> default_measures();

struct EvalOptions {
  int relevance_threshold = 1;
};

struct EvalResult {
  Measure measure;
  std::map<std::string, double> per_query;
  double mean = 0.0;  // 0 when no query was evaluated
  std::vector<std::string> excluded;
};

// Throws std::invalid_argument for k < 1 and ValidationError when the run
// lists a query twice.
EvalResult mrr_at_k(const std::vector<Ranking>& run, const Qrels& qrels,
                    std::size_t k, const EvalOptions& options = {});
EvalResult recall_at_k(const std::vector<Ranking>& run, const Qrels& qrels,
                       std::size_t k, const EvalOptions& options = {});
EvalResult ndcg_at_k(const std::vector<Ranking>& run, const Qrels& qrels,
                     std::size_t k, const EvalOptions& options = {});

EvalResult evaluate(const std::vector<Ranking>& run, const Qrels& qrels,
                    const Measure& measure, const EvalOptions& options = {});
std::vector<EvalResult> evaluate(const std::vector<Ranking>& run, const Qrels& qrels,
                                 const std::vector<Measure>& measures,
                                 const EvalOptions& options = {});

// measure,query_id,value with one row per evaluated query (ascending id)
// followed by a summary row whose query_id is "all".
void write_eval_csv(std::ostream& out, const std::vector<EvalResult>& results);

}  // namespace wackymeter
