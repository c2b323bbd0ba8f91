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
#include "wackymeter/ablation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>
#include <spdlog/logger.h>

#include "wackymeter/errors.hpp"
#include "wackymeter/format.hpp"
#include "wackymeter/logging.hpp"
#include "wackymeter/parallel.hpp"
#include "wackymeter/random.hpp"

namespace wackymeter {

RemovalPool parse_removal_pool(std::string_view text) {
  if (text == "expansion-observed") return RemovalPool::kExpansionObserved;
  if (text == "full-vocabulary") return RemovalPool::kFullVocabulary;
  throw std::invalid_argument(fmt::format(
      "unknown removal pool '{}' (expected expansion-observed or full-vocabulary)", text));
}

std::string to_string(RemovalPool pool) {
  return pool == RemovalPool::kExpansionObserved ? "expansion-observed" : "full-vocabulary";
}

std::vector<std::size_t> default_thresholds(std::size_t scored_count) {
  std::vector<std::size_t> out{100, 1000, 10000};
  for (std::size_t n = 100000; n <= scored_count; n *= 10) out.push_back(n);
  return out;
}

SparseVector remove_tokens(const SparseVector& v, const ExpansionRecord& record,
                           const TokenSet& removal_set) {
  if (record.input_id != v.id) {
    throw ValidationError(fmt::format("remove_tokens: record '{}' paired with vector '{}'",
                                      record.input_id, v.id));
  }
  SparseVector out{v.id, {}};
  out.terms.reserve(v.terms.size());
  for (const auto& tw : v.terms) {
    const bool drop = removal_set.count(tw.token) != 0 && record.t_exp.count(tw.token) != 0;
    if (!drop) out.terms.push_back(tw);
  }
  return out;
}

std::vector<double> evaluate_vectors(const std::vector<SparseVector>& query_vectors,
                                     const ImpactIndex& doc_index, const Qrels& qrels,
                                     const std::vector<Measure>& measures,
                                     const EvalOptions& options) {
  std::size_t depth = 1;
  for (const auto& m : measures) depth = std::max(depth, m.k);
  std::vector<Ranking> run;
  run.reserve(query_vectors.size());
  for (const auto& v : query_vectors) run.push_back(doc_index.search(v, depth));
  std::vector<double> out;
  out.reserve(measures.size());
  for (const auto& r : evaluate(run, qrels, measures, options)) out.push_back(r.mean);
  return out;
}

namespace {

std::vector<SparseVector> ablate(const std::vector<const SparseVector*>& vectors,
                                 const std::vector<ExpansionRecord>& records,
                                 const TokenSet& removal) {
  std::vector<SparseVector> out;
  out.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    out.push_back(remove_tokens(*vectors[i], records[i], removal));
  }
  return out;
}

}  // namespace

AblationReport run_ablation(const std::vector<TokenizedInput>& queries,
                            const std::vector<SparseVector>& query_vectors,
                            const ImpactIndex& doc_index, const Qrels& qrels,
                            const TokenWackinessTable& table,
                            const AblationConfig& cfg) {
  if (cfg.repeats < 1) throw std::invalid_argument("ablation: repeats must be >= 1");
  if (cfg.measures.empty()) throw std::invalid_argument("ablation: no measures");
  const auto thresholds =
      cfg.thresholds.empty() ? default_thresholds(table.scored_count()) : cfg.thresholds;
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (thresholds[i - 1] >= thresholds[i]) {
      throw std::invalid_argument("ablation: thresholds must be strictly ascending");
    }
  }

  const auto records = expansion_records(queries, query_vectors, cfg.special_tokens);
  std::vector<const SparseVector*> vectors;
  {
    std::unordered_map<std::string_view, const SparseVector*> by_id;
    for (const auto& v : query_vectors) by_id.emplace(v.id, &v);
    for (const auto& q : queries) vectors.push_back(by_id.at(q.id));
  }

  std::vector<TokenId> pool;
  if (cfg.removal_pool == RemovalPool::kExpansionObserved) {
    TokenSet observed;
    for (const auto& r : records) observed.insert(r.t_exp.begin(), r.t_exp.end());
    pool.assign(observed.begin(), observed.end());
  } else {
    if (cfg.vocab_size == 0) {
      throw std::invalid_argument("ablation: full-vocabulary pool needs the vocabulary size");
    }
    pool.resize(cfg.vocab_size);
    for (std::size_t t = 0; t < pool.size(); ++t) pool[t] = static_cast<TokenId>(t);
  }

  const auto ranked = table.ranked();
  const std::string checksum = doc_index.checksum();

  AblationReport report;
  report.measures = cfg.measures;
  report.repeats = cfg.repeats;
  report.pool_size = pool.size();
  report.doc_index_checksum = checksum;
  report.rows.resize(thresholds.size());
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    auto& row = report.rows[i];
    row.threshold = thresholds[i];
    row.wacky_removed = std::min(thresholds[i], ranked.size());
    row.random_removed = std::min(thresholds[i], pool.size());
    row.clamped = row.wacky_removed < thresholds[i] || row.random_removed < thresholds[i];
    if (row.clamped) {
      logger()->warn("threshold {} exceeds the available tokens ({} scored, {} in pool); clamped",
                     thresholds[i], ranked.size(), pool.size());
    }
  }

  // Jobs: 0 full, 1 no expansion, then per threshold one wacky condition
  // followed by cfg.repeats random ones.
  const std::size_t per_threshold = 1 + cfg.repeats;
  const std::size_t jobs = 2 + thresholds.size() * per_threshold;
  std::vector<std::vector<double>> scores(jobs);
  parallel_for(jobs, cfg.threads, [&](std::size_t job) {
    TokenSet removal;
    if (job == 0) {
      // Nothing removed.
    } else if (job == 1) {
      for (const auto& r : records) removal.insert(r.t_exp.begin(), r.t_exp.end());
    } else {
      const std::size_t t = (job - 2) / per_threshold;
      const std::size_t slot = (job - 2) % per_threshold;
      const auto& row = report.rows[t];
      if (slot == 0) {
        for (std::size_t i = 0; i < row.wacky_removed; ++i) removal.insert(ranked[i].first);
      } else {
        Rng rng = Rng::derive(cfg.seed, {row.threshold, slot - 1});
        for (std::size_t i : sample_without_replacement(rng, pool.size(), row.random_removed)) {
          removal.insert(pool[i]);
        }
      }
    }
    scores[job] = evaluate_vectors(ablate(vectors, records, removal), doc_index, qrels,
                                   cfg.measures, cfg.eval);
  });

  report.full = scores[0];
  report.no_expansion = scores[1];
  const std::size_t m = cfg.measures.size();
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    auto& row = report.rows[t];
    const std::size_t base = 2 + t * per_threshold;
    row.wacky = scores[base];
    row.random_mean.assign(m, 0.0);
    row.random_std.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      // Welford's update: constant samples give their value and a zero std
      // exactly.
      double mean = 0.0;
      double m2 = 0.0;
      for (std::size_t r = 0; r < cfg.repeats; ++r) {
        const double x = scores[base + 1 + r][j];
        const double delta = x - mean;
        mean += delta / static_cast<double>(r + 1);
        m2 += delta * (x - mean);
      }
      row.random_mean[j] = mean;
      row.random_std[j] =
          cfg.repeats > 1 ? std::sqrt(std::max(0.0, m2) / static_cast<double>(cfg.repeats - 1))
                          : 0.0;
    }
  }

  if (doc_index.checksum() != checksum) {
    throw Error("ablation modified the document index");
  }
  return report;
}

std::vector<BandCheck> significance_band(const AblationReport& report) {
  std::vector<BandCheck> out;
  for (const auto& row : report.rows) {
    for (std::size_t j = 0; j < report.measures.size(); ++j) {
      BandCheck b;
      b.threshold = row.threshold;
      b.measure = j;
      b.lower = row.random_mean[j] - 2.0 * row.random_std[j];
      b.upper = row.random_mean[j] + 2.0 * row.random_std[j];
      b.outside = row.wacky[j] < b.lower || row.wacky[j] > b.upper;
      out.push_back(b);
    }
  }
  return out;
}

void write_ablation_csv(std::ostream& out, const AblationReport& report) {
  out << "threshold,measure,wacky_score,random_mean,random_std,outside_band\n";
  const auto bands = significance_band(report);
  std::size_t b = 0;
  for (const auto& row : report.rows) {
    for (std::size_t j = 0; j < report.measures.size(); ++j, ++b) {
      out << row.threshold << ',' << report.measures[j].name() << ','
          << format_real(row.wacky[j]) << ',' << format_real(row.random_mean[j]) << ','
          << format_real(row.random_std[j]) << ',' << (bands[b].outside ? "true" : "false")
          << '\n';
    }
  }
}

void write_endpoints_csv(std::ostream& out, const AblationReport& report) {
  out << "condition,measure,value\n";
  for (std::size_t j = 0; j < report.measures.size(); ++j) {
    out << "full," << report.measures[j].name() << ',' << format_real(report.full[j]) << '\n';
  }
  for (std::size_t j = 0; j < report.measures.size(); ++j) {
    out << "no_expansion," << report.measures[j].name() << ','
        << format_real(report.no_expansion[j]) << '\n';
  }
}

}  // namespace wackymeter
