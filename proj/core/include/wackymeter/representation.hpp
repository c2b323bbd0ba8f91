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

#include <string>
#include <vector>

#include "wackymeter/types.hpp"

namespace wackymeter {

enum class Aggregation { kMax, kSum, kCls };

Aggregation parse_aggregation(const std::string& text);  // max | sum | cls
std::string to_string(Aggregation mode);

enum class RegularizerKind { kFlops, kL1 };

RegularizerKind parse_regularizer(const std::string& text);  // flops | l1

struct RegularizerConfig {
  double lambda_q = 0.0;
  double lambda_d = 0.0;
  RegularizerKind kind = RegularizerKind::kFlops;
};

// Vectors of one training batch; must be non-empty.
struct Batch {
  std::vector<SparseVector> vectors;
};

// x -> ln(1 + max(0, x)) per entry; entries mapping to 0 are dropped.
// Throws ValidationError on non-finite input.
std::vector<TermWeight> activate(const std::vector<TermWeight>& raw_row);

// Applies activate() to every row.
PerTokenMatrix activate(const PerTokenMatrix& raw);

// Pools post-activation rows into one vector.
//   MAX: per-dimension maximum over rows
//   SUM: per-dimension sum, rows added in position order
//   CLS: the row at cls_position (ValidationError when absent)
// Only the union of row supports is visited; zeros are dropped.
SparseVector aggregate(const PerTokenMatrix& matrix, Aggregation mode);

// sum_j ((1/N) sum_i v_i[j])^2, with j ascending.
double flops_loss(const Batch& batch);

// (1/N) sum_i sum_j |v_i[j]|.
double l1_loss(const Batch& batch);

// lambda_q * L(queries) + lambda_d * L(docs), L chosen by cfg.kind.
double combined_regularizer(const Batch& query_batch, const Batch& doc_batch,
                            const RegularizerConfig& cfg);

}  // namespace wackymeter
