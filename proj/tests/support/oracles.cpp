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
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace wackymeter::testing {

namespace {

bool before(const ScoredDoc& a, const ScoredDoc& b) {
  if (a.score > b.score) return true;
  if (a.score < b.score) return false;
  return a.doc_id < b.doc_id;
}

std::map<TokenId, double> as_map(const SparseVector& v) {
  std::map<TokenId, double> m;
  for (const auto& tw : v.terms) m[tw.token] = tw.weight;
  return m;
}

}  // namespace

double oracle_dot(const SparseVector& q, const SparseVector& d) {
  const auto dm = as_map(d);
  double s = 0.0;
  for (const auto& tw : q.terms) {
    auto it = dm.find(tw.token);
    if (it != dm.end()) s += tw.weight * it->second;
  }
  return s;
}

Ranking oracle_search(const SparseVector& q, const std::vector<SparseVector>& docs,
                      std::size_t k) {
  Ranking r{q.id, {}};
  for (const auto& d : docs) {
    const double s = oracle_dot(q, d);
    if (s > 0.0) r.entries.push_back({d.id, s});
  }
  std::sort(r.entries.begin(), r.entries.end(), before);
  if (r.entries.size() > k) r.entries.resize(k);
  return r;
}

Ranking oracle_bm25(const std::vector<TokenId>& query,
                    const std::vector<TokenizedInput>& corpus, std::size_t k,
                    double k1, double b) {
  Ranking r{"", {}};
  if (query.empty()) return r;
  const double n = static_cast<double>(corpus.size());
  double total = 0.0;
  for (const auto& d : corpus) total += static_cast<double>(d.tokens.size());
  const double avg = total / n;
  std::map<TokenId, double> qcount;
  for (TokenId t : query) qcount[t] += 1.0;
  for (const auto& d : corpus) {
    double s = 0.0;
    for (const auto& [t, qc] : qcount) {
      double df = 0.0;
      for (const auto& other : corpus) {
        if (std::find(other.tokens.begin(), other.tokens.end(), t) != other.tokens.end()) df += 1.0;
      }
      if (df == 0.0) continue;
      const double tf = static_cast<double>(std::count(d.tokens.begin(), d.tokens.end(), t));
      if (tf == 0.0) continue;
      const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
      const double norm = avg > 0.0 ? static_cast<double>(d.tokens.size()) / avg : 1.0;
      s += qc * idf * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * norm));
    }
    r.entries.push_back({d.id, s});
  }
  std::sort(r.entries.begin(), r.entries.end(), before);
  if (r.entries.size() > k) r.entries.resize(k);
  return r;
}

std::map<TokenId, OracleRow> oracle_wackiness(
    const std::vector<TokenizedInput>& inputs,
    const std::vector<SparseVector>& input_vectors,
    const std::vector<SparseVector>& doc_vectors,
    const std::vector<TokenizedInput>& corpus, std::size_t k,
    const std::vector<TokenId>& special_tokens) {
  std::map<std::string, const TokenizedInput*> docs;
  for (const auto& d : corpus) docs[d.id] = &d;
  const double n = static_cast<double>(corpus.size());

  std::map<TokenId, std::vector<double>> samples;
  for (const auto& input : inputs) {
    const SparseVector* v = nullptr;
    for (const auto& cand : input_vectors) {
      if (cand.id == input.id) v = &cand;
    }
    std::set<TokenId> orig;
    for (TokenId t : input.tokens) {
      if (std::find(special_tokens.begin(), special_tokens.end(), t) == special_tokens.end()) {
        orig.insert(t);
      }
    }
    std::vector<TokenId> expansions;
    for (const auto& tw : v->terms) {
      if (orig.count(tw.token) == 0) expansions.push_back(tw.token);
    }
    if (expansions.empty()) continue;
    const Ranking ranked = oracle_search(*v, doc_vectors, k);
    if (ranked.entries.empty()) continue;
    for (TokenId t : expansions) {
      double count = 0.0;
      double len = 0.0;
      for (const auto& e : ranked.entries) {
        const auto& toks = docs.at(e.doc_id)->tokens;
        count += static_cast<double>(std::count(toks.begin(), toks.end(), t));
        len += static_cast<double>(toks.size());
      }
      double s = 0.0;
      if (count > 0.0 && len > 0.0) {
        double df = 0.0;
        for (const auto& d : corpus) {
          if (std::find(d.tokens.begin(), d.tokens.end(), t) != d.tokens.end()) df += 1.0;
        }
        s = (count / len) * std::log(n / df);
      }
      samples[t].push_back(s);
    }
  }

  std::map<TokenId, OracleRow> rows;
  for (const auto& [t, xs] : samples) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    rows[t] = {xs.size(), sum / static_cast<double>(xs.size()), 0.0};
  }
  if (rows.empty()) return rows;
  double lo = rows.begin()->second.mean;
  double hi = lo;
  for (const auto& [t, r] : rows) {
    lo = std::min(lo, r.mean);
    hi = std::max(hi, r.mean);
  }
  for (auto& [t, r] : rows) r.wackiness = hi > lo ? 1.0 - (r.mean - lo) / (hi - lo) : 0.0;
  return rows;
}

double oracle_flops(const std::vector<SparseVector>& batch, std::size_t vocab_size) {
  std::vector<std::vector<double>> dense(batch.size(), std::vector<double>(vocab_size, 0.0));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (const auto& tw : batch[i].terms) dense[i][tw.token] = tw.weight;
  }
  double loss = 0.0;
  for (std::size_t j = 0; j < vocab_size; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) col += dense[i][j];
    const double mean = col / static_cast<double>(batch.size());
    loss += mean * mean;
  }
  return loss;
}

double oracle_l1(const std::vector<SparseVector>& batch, std::size_t vocab_size) {
  double total = 0.0;
  for (const auto& v : batch) {
    std::vector<double> dense(vocab_size, 0.0);
    for (const auto& tw : v.terms) dense[tw.token] = tw.weight;
    for (double x : dense) total += std::fabs(x);
  }
  return total / static_cast<double>(batch.size());
}

std::vector<double> oracle_bins(std::vector<double> scores, std::size_t bins) {
  std::sort(scores.begin(), scores.end(), [](double a, double b) { return a > b; });
  const std::size_t m = scores.size();
  std::vector<double> sums(bins, 0.0);
  std::vector<std::size_t> counts(bins, 0);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < bins; ++i) {
      if (i * m / bins <= r && r < (i + 1) * m / bins) {
        sums[i] += scores[r];
        ++counts[i];
      }
    }
  }
  std::vector<double> means(bins, 0.0);
  for (std::size_t i = 0; i < bins; ++i) {
    if (counts[i] > 0) {
      means[i] = sums[i] / static_cast<double>(counts[i]);
      continue;
    }
    // Empty bin: the rank r whose interval [r/M, (r+1)/M) holds i/B.
    for (std::size_t r = 0; r < m; ++r) {
      if (r * bins <= i * m && i * m < (r + 1) * bins) means[i] = scores[r];
    }
  }
  return means;
}

double oracle_mrr(const std::vector<std::string>& ranked,
                  const std::map<std::string, int>& grades, std::size_t k, int threshold) {
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
    auto it = grades.find(ranked[i]);
    if (it != grades.end() && it->second >= threshold) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

double oracle_recall(const std::vector<std::string>& ranked,
                     const std::map<std::string, int>& grades, std::size_t k, int threshold) {
  std::set<std::string> relevant;
  for (const auto& [doc, g] : grades) {
    if (g >= threshold) relevant.insert(doc);
  }
  std::set<std::string> top(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranked.size())));
  std::size_t hit = 0;
  for (const auto& d : relevant) hit += top.count(d);
  return static_cast<double>(hit) / static_cast<double>(relevant.size());
}

double oracle_ndcg(const std::vector<std::string>& ranked,
                   const std::map<std::string, int>& grades, std::size_t k) {
  auto gain = [](int g) { return g > 0 ? std::pow(2.0, g) - 1.0 : 0.0; };
  double dcg = 0.0;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
    auto it = grades.find(ranked[i]);
    if (it != grades.end()) dcg += gain(it->second) / std::log2(static_cast<double>(i) + 2.0);
  }
  std::vector<int> ideal;
  for (const auto& [doc, g] : grades) ideal.push_back(g);
  std::sort(ideal.rbegin(), ideal.rend());
  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal.size() && i < k; ++i) {
    idcg += gain(ideal[i]) / std::log2(static_cast<double>(i) + 2.0);
  }
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

}  // namespace wackymeter::testing
