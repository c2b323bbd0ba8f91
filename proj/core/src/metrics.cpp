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
#include "wackymeter/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/logger.h>

#include "wackymeter/errors.hpp"
#include "wackymeter/format.hpp"
#include "wackymeter/logging.hpp"

namespace wackymeter {

Measure Measure::parse(std::string_view text) {
  const auto at = text.find('@');
  if (at == std::string_view::npos) {
    throw std::invalid_argument(fmt::format("measure '{}' lacks '@k'", text));
  }
  std::string name(text.substr(0, at));
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  Measure m;
  if (name == "mrr") {
    m.kind = MeasureKind::kMrr;
  } else if (name == "recall") {
    m.kind = MeasureKind::kRecall;
  } else if (name == "ndcg") {
    m.kind = MeasureKind::kNdcg;
  } else {
    throw std::invalid_argument(fmt::format("unknown measure '{}'", text));
  }
  const auto digits = text.substr(at + 1);
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), m.k);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || m.k < 1) {
    throw std::invalid_argument(fmt::format("measure '{}': k must be a positive integer", text));
  }
  return m;
}

std::string Measure::name() const {
  switch (kind) {
    case MeasureKind::kMrr: return fmt::format("MRR@{}", k);
    case MeasureKind::kRecall: return fmt::format("Recall@{}", k);
    case MeasureKind::kNdcg: return fmt::format("NDCG@{}", k);
  }
  return {};
}

std::vector<Measure> default_measures() {
  return {{MeasureKind::kMrr, 10},
          {MeasureKind::kRecall, 10},
          {MeasureKind::kRecall, 100},
          {MeasureKind::kRecall, 1000},
          {MeasureKind::kNdcg, 10}};
}

namespace {

using Judgments = std::map<std::string, int>;

double mrr(const Ranking& r, const Judgments& j, std::size_t k, int threshold) {
  const std::size_t depth = std::min(k, r.entries.size());
  for (std::size_t i = 0; i < depth; ++i) {
    auto it = j.find(r.entries[i].doc_id);
    if (it != j.end() && it->second >= threshold) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

double recall(const Ranking& r, const Judgments& j, std::size_t k, int threshold) {
  std::size_t relevant = 0;
  for (const auto& [doc, g] : j) relevant += g >= threshold ? 1 : 0;
  const std::size_t depth = std::min(k, r.entries.size());
  std::size_t found = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    auto it = j.find(r.entries[i].doc_id);
    if (it != j.end() && it->second >= threshold) ++found;
  }
  return static_cast<double>(found) / static_cast<double>(relevant);
}

double gain(int grade) { return grade > 0 ? std::exp2(static_cast<double>(grade)) - 1.0 : 0.0; }
double discount(std::size_t rank) { return 1.0 / std::log2(static_cast<double>(rank) + 1.0); }

double ndcg(const Ranking& r, const Judgments& j, std::size_t k) {
  const std::size_t depth = std::min(k, r.entries.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    auto it = j.find(r.entries[i].doc_id);
    if (it != j.end()) dcg += gain(it->second) * discount(i + 1);
  }
  std::vector<int> grades;
  for (const auto& [doc, g] : j) {
    if (g > 0) grades.push_back(g);
  }
  std::sort(grades.begin(), grades.end(), std::greater<>());
  double ideal = 0.0;
  for (std::size_t i = 0; i < std::min(k, grades.size()); ++i) {
    ideal += gain(grades[i]) * discount(i + 1);
  }
  return std::min(1.0, dcg / ideal);
}

bool judged(const Judgments& j, MeasureKind kind, int threshold) {
  const int floor = kind == MeasureKind::kNdcg ? 1 : threshold;
  return std::any_of(j.begin(), j.end(), [&](const auto& e) { return e.second >= floor; });
}

}  // namespace

EvalResult evaluate(const std::vector<Ranking>& run, const Qrels& qrels,
                    const Measure& measure, const EvalOptions& options) {
  if (measure.k < 1) throw std::invalid_argument("evaluate: k must be >= 1");
  EvalResult result;
  result.measure = measure;
  std::set<std::string_view> seen;
  double sum = 0.0;
  for (const auto& r : run) {
    if (!seen.insert(r.query_id).second) {
      throw ValidationError(fmt::format("run lists query '{}' twice", r.query_id));
    }
    const Judgments* j = qrels.judgments(r.query_id);
    if (j == nullptr || !judged(*j, measure.kind, options.relevance_threshold)) {
      result.excluded.push_back(r.query_id);
      continue;
    }
    double v = 0.0;
    switch (measure.kind) {
      case MeasureKind::kMrr: v = mrr(r, *j, measure.k, options.relevance_threshold); break;
      case MeasureKind::kRecall: v = recall(r, *j, measure.k, options.relevance_threshold); break;
      case MeasureKind::kNdcg: v = ndcg(r, *j, measure.k); break;
    }
    result.per_query.emplace(r.query_id, v);
  }
  // Summing in query-id order keeps the mean independent of run order.
  for (const auto& [q, v] : result.per_query) sum += v;
  if (!result.per_query.empty()) sum /= static_cast<double>(result.per_query.size());
  result.mean = sum;
  if (!result.excluded.empty()) {
    logger()->info("{}: {} query(ies) without usable judgments excluded", measure.name(),
                   result.excluded.size());
  }
  return result;
}

std::vector<EvalResult> evaluate(const std::vector<Ranking>& run, const Qrels& qrels,
                                 const std::vector<Measure>& measures,
                                 const EvalOptions& options) {
  std::vector<EvalResult> out;
  out.reserve(measures.size());
  for (const auto& m : measures) out.push_back(evaluate(run, qrels, m, options));
  return out;
}

EvalResult mrr_at_k(const std::vector<Ranking>& run, const Qrels& qrels, std::size_t k,
                    const EvalOptions& options) {
  return evaluate(run, qrels, Measure{MeasureKind::kMrr, k}, options);
}

EvalResult recall_at_k(const std::vector<Ranking>& run, const Qrels& qrels, std::size_t k,
                       const EvalOptions& options) {
  return evaluate(run, qrels, Measure{MeasureKind::kRecall, k}, options);
}

EvalResult ndcg_at_k(const std::vector<Ranking>& run, const Qrels& qrels, std::size_t k,
                     const EvalOptions& options) {
  return evaluate(run, qrels, Measure{MeasureKind::kNdcg, k}, options);
}

void write_eval_csv(std::ostream& out, const std::vector<EvalResult>& results) {
  out << "measure,query_id,value\n";
  for (const auto& r : results) {
    const std::string name = r.measure.name();
    for (const auto& [q, v] : r.per_query) {
      out << name << ',' << csv_field(q) << ',' << format_real(v) << '\n';
    }
    out << name << ",all," << format_real(r.mean) << '\n';
  }
}

}  // namespace wackymeter
