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
#include "wackymeter/representation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "wackymeter/errors.hpp"

namespace wackymeter {

Aggregation parse_aggregation(const std::string& text) {
  if (text == "max" || text == "MAX") return Aggregation::kMax;
  if (text == "sum" || text == "SUM") return Aggregation::kSum;
  if (text == "cls" || text == "CLS") return Aggregation::kCls;
  throw std::invalid_argument(
      fmt::format("unknown aggregation '{}' (expected max, sum or cls)", text));
}

std::string to_string(Aggregation mode) {
  switch (mode) {
    case Aggregation::kMax: return "max";
    case Aggregation::kSum: return "sum";
    case Aggregation::kCls: return "cls";
  }
  return "?";
}

RegularizerKind parse_regularizer(const std::string& text) {
  if (text == "flops" || text == "FLOPS") return RegularizerKind::kFlops;
  if (text == "l1" || text == "L1") return RegularizerKind::kL1;
  throw std::invalid_argument(
      fmt::format("unknown regularizer '{}' (expected flops or l1)", text));
}

std::vector<TermWeight> activate(const std::vector<TermWeight>& raw_row) {
  std::vector<TermWeight> out;
  out.reserve(raw_row.size());
  for (const auto& [token, x] : raw_row) {
    if (!std::isfinite(x)) {
      throw ValidationError(
          fmt::format("activate: non-finite logit for token {}", token));
    }
    const double v = std::log1p(std::max(0.0, x));
    if (v > 0.0) out.push_back({token, v});
  }
  return out;
}

PerTokenMatrix activate(const PerTokenMatrix& raw) {
  PerTokenMatrix out{raw.id, {}, raw.cls_position};
  out.rows.reserve(raw.rows.size());
  for (const auto& row : raw.rows) out.rows.push_back({row.position, activate(row.weights)});
  return out;
}

SparseVector aggregate(const PerTokenMatrix& matrix, Aggregation mode) {
  if (mode == Aggregation::kCls) {
    if (!matrix.cls_position) {
      throw ValidationError(fmt::format(
          "aggregate: '{}' has no cls_pos, CLS pooling impossible", matrix.id));
    }
    const TokenRow* row = matrix.row_at(*matrix.cls_position);
    if (row == nullptr) {
      throw ValidationError(fmt::format(
          "aggregate: '{}' cls_pos {} names no row", matrix.id, *matrix.cls_position));
    }
    return SparseVector::from_terms(matrix.id, row->weights);
  }

  std::map<TokenId, double> pooled;
  for (const auto& row : matrix.rows) {
    for (const auto& [token, w] : row.weights) {
      if (w < 0.0) {
        throw ValidationError(fmt::format(
            "aggregate: '{}' holds negative weights; activate raw rows first",
            matrix.id));
      }
      auto [it, inserted] = pooled.try_emplace(token, w);
      if (inserted) continue;
      if (mode == Aggregation::kMax) {
        it->second = std::max(it->second, w);
      } else {
        it->second += w;
      }
    }
  }
  std::vector<TermWeight> terms;
  terms.reserve(pooled.size());
  for (const auto& [t, w] : pooled) terms.push_back({t, w});
  return SparseVector::from_terms(matrix.id, std::move(terms));
}

namespace {
void check_batch(const Batch& batch) {
  if (batch.vectors.empty()) {
    throw std::invalid_argument("regularizer: batch must hold at least one vector");
  }
}
}  // namespace

double flops_loss(const Batch& batch) {
  check_batch(batch);
  std::map<TokenId, double> column_sums;
  for (const auto& v : batch.vectors) {
    for (const auto& [t, w] : v.terms) column_sums[t] += w;
  }
  const double n = static_cast<double>(batch.vectors.size());
  double loss = 0.0;
  for (const auto& [t, sum] : column_sums) {
    const double mean = sum / n;
    loss += mean * mean;
  }
  return loss;
}

double l1_loss(const Batch& batch) {
  check_batch(batch);
  double total = 0.0;
  for (const auto& v : batch.vectors) {
    double row = 0.0;
    for (const auto& [t, w] : v.terms) row += std::abs(w);
    total += row;
  }
  return total / static_cast<double>(batch.vectors.size());
}

double combined_regularizer(const Batch& query_batch, const Batch& doc_batch,
                            const RegularizerConfig& cfg) {
  if (!std::isfinite(cfg.lambda_q) || !std::isfinite(cfg.lambda_d) ||
      cfg.lambda_q < 0.0 || cfg.lambda_d < 0.0) {
    throw std::invalid_argument("regularizer lambdas must be finite and >= 0");
  }
  auto loss = [&](const Batch& b) {
    return cfg.kind == RegularizerKind::kFlops ? flops_loss(b) : l1_loss(b);
  };
  return cfg.lambda_q * loss(query_batch) + cfg.lambda_d * loss(doc_batch);
}

}  // namespace wackymeter
