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
#include "wackymeter/lexical_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "binary_io.hpp"
#include "wackymeter/errors.hpp"
#include "wackymeter/io.hpp"

namespace wackymeter {

namespace {
constexpr std::string_view kMagic = "WMLEXIDX";
constexpr std::uint32_t kVersion = 1;
const std::vector<Posting> kNoPostings;
}  // namespace

LexicalIndex LexicalIndex::build(const std::vector<TokenizedInput>& corpus) {
  if (corpus.empty()) {
    throw ValidationError("cannot index an empty corpus");
  }
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus[a].id < corpus[b].id;
  });

  LexicalIndex index;
  index.doc_ids_.reserve(corpus.size());
  index.forward_.reserve(corpus.size());
  for (std::size_t i : order) {
    const auto& doc = corpus[i];
    if (!index.doc_ids_.empty() && index.doc_ids_.back() == doc.id) {
      throw ValidationError(fmt::format("duplicate document id '{}'", doc.id));
    }
    std::map<TokenId, std::uint32_t> counts;
    for (TokenId t : doc.tokens) ++counts[t];
    std::vector<TermCount> terms;
    terms.reserve(counts.size());
    for (const auto& [t, c] : counts) terms.push_back({t, c});
    index.doc_ids_.push_back(doc.id);
    index.forward_.push_back(std::move(terms));
  }
  index.finalize();
  return index;
}

void LexicalIndex::finalize() {
  by_id_.clear();
  stats_ = CollectionStats{};
  stats_.doc_count = doc_ids_.size();
  stats_.doc_len.assign(doc_ids_.size(), 0);

  TokenId max_token = 0;
  bool any = false;
  for (const auto& terms : forward_) {
    if (!terms.empty()) {
      max_token = std::max(max_token, terms.back().token);
      any = true;
    }
  }
  const std::size_t span = any ? static_cast<std::size_t>(max_token) + 1 : 0;
  stats_.doc_freq.assign(span, 0);
  postings_.assign(span, {});

  for (DocIndex d = 0; d < doc_ids_.size(); ++d) {
    by_id_.emplace(doc_ids_[d], d);
    std::uint32_t len = 0;
    for (const auto& tc : forward_[d]) {
      len += tc.count;
      ++stats_.doc_freq[tc.token];
      postings_[tc.token].push_back({d, tc.count});
    }
    stats_.doc_len[d] = len;
    stats_.total_len += len;
  }
}

std::optional<DocIndex> LexicalIndex::find(const std::string& doc_id) const {
  auto it = by_id_.find(doc_id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

const std::vector<Posting>& LexicalIndex::postings(TokenId token) const noexcept {
  return token < postings_.size() ? postings_[token] : kNoPostings;
}

std::uint32_t LexicalIndex::count(TokenId token, DocIndex doc) const {
  const auto& terms = forward_.at(doc);
  auto it = std::lower_bound(
      terms.begin(), terms.end(), token,
      [](const TermCount& tc, TokenId t) { return tc.token < t; });
  return (it != terms.end() && it->token == token) ? it->count : 0;
}

std::string LexicalIndex::serialize() const {
  detail::BinaryWriter w;
  w.bytes(kMagic);
  w.u32(kVersion);
  w.u64(doc_ids_.size());
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    w.str(doc_ids_[d]);
    w.u32(static_cast<std::uint32_t>(forward_[d].size()));
    for (const auto& tc : forward_[d]) {
      w.u32(tc.token);
      w.u32(tc.count);
    }
  }
  return w.take();
}

LexicalIndex LexicalIndex::deserialize(const std::string& bytes,
                                       const std::string& source) {
  detail::BinaryReader r(bytes, source);
  r.expect_magic(kMagic, kVersion);
  LexicalIndex index;
  const auto n = r.u64();
  for (std::uint64_t d = 0; d < n; ++d) {
    index.doc_ids_.push_back(r.str());
    if (d > 0 && !(index.doc_ids_[d - 1] < index.doc_ids_[d])) {
      r.fail("document ids out of order");
    }
    const auto terms = r.u32();
    std::vector<TermCount> row;
    row.reserve(terms);
    for (std::uint32_t i = 0; i < terms; ++i) {
      TermCount tc{r.u32(), r.u32()};
      if (tc.count == 0 || (!row.empty() && row.back().token >= tc.token)) {
        r.fail("malformed term list");
      }
      row.push_back(tc);
    }
    index.forward_.push_back(std::move(row));
  }
  if (!r.done()) r.fail("trailing bytes after index payload");
  if (index.doc_ids_.empty()) r.fail("index holds no documents");
  index.finalize();
  return index;
}

void LexicalIndex::save(const std::filesystem::path& path) const {
  write_file(path, serialize());
}

LexicalIndex LexicalIndex::load(const std::filesystem::path& path) {
  return deserialize(read_file(path), path.string());
}

LexicalIndex build_lexical_index(const std::vector<TokenizedInput>& corpus) {
  return LexicalIndex::build(corpus);
}

std::optional<double> idf(TokenId token, const CollectionStats& stats) {
  const auto df = stats.df(token);
  if (df == 0) return std::nullopt;
  return std::log(static_cast<double>(stats.doc_count) / static_cast<double>(df));
}

// --- BM25 -------------------------------------------------------------------

namespace {

double bm25_idf(std::uint32_t df, std::size_t n) {
  const double N = static_cast<double>(n);
  const double f = static_cast<double>(df);
  return std::log(1.0 + (N - f + 0.5) / (f + 0.5));
}

Ranking bm25_rank(const std::string& query_id,
                  const std::vector<TermWeight>& query,
                  const LexicalIndex& index, std::size_t k,
                  const Bm25Params& p) {
  if (k == 0) throw std::invalid_argument("bm25_search: k must be >= 1");
  Ranking ranking{query_id, {}};
  if (query.empty()) return ranking;

  const auto& stats = index.stats();
  const double avg = stats.avg_len();
  std::vector<double> acc(index.doc_count(), 0.0);
  for (const auto& [token, qw] : query) {
    const auto& plist = index.postings(token);
    if (plist.empty()) continue;
    const double w = qw * bm25_idf(stats.df(token), stats.doc_count);
    for (const auto& [doc, tf] : plist) {
      const double f = static_cast<double>(tf);
      const double norm =
          avg > 0.0 ? static_cast<double>(stats.doc_len[doc]) / avg : 1.0;
      acc[doc] += w * (f * (p.k1 + 1.0)) / (f + p.k1 * (1.0 - p.b + p.b * norm));
    }
  }

  std::vector<DocIndex> order(acc.size());
  std::iota(order.begin(), order.end(), DocIndex{0});
  const std::size_t take = std::min(k, order.size());
  // Doc numbers follow doc-id order, so this is the canonical tie break.
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                    order.end(), [&](DocIndex a, DocIndex b) {
                      if (acc[a] != acc[b]) return acc[a] > acc[b];
                      return a < b;
                    });
  ranking.entries.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    ranking.entries.push_back({index.doc_id(order[i]), acc[order[i]]});
  }
  return ranking;
}

std::vector<TermWeight> query_counts(const TokenizedInput& query) {
  std::map<TokenId, double> counts;
  for (TokenId t : query.tokens) counts[t] += 1.0;
  std::vector<TermWeight> out;
  out.reserve(counts.size());
  for (const auto& [t, c] : counts) out.push_back({t, c});
  return out;
}

}  // namespace

Ranking bm25_search(const TokenizedInput& query, const LexicalIndex& index,
                    std::size_t k, Bm25Params params) {
  return bm25_rank(query.id, query_counts(query), index, k, params);
}

Ranking bm25_search(const SparseVector& query, const LexicalIndex& index,
                    std::size_t k, Bm25Params params) {
  return bm25_rank(query.id, query.terms, index, k, params);
}

Ranking Bm25Retriever::search(const SparseVector& query, std::size_t k) const {
  return bm25_search(query, index_, k, params_);
}

// --- RM3 --------------------------------------------------------------------

SparseVector rm3_expand(const TokenizedInput& query, const LexicalIndex& index,
                        const Rm3Params& params) {
  if (params.fb_docs < 1 || params.fb_terms < 1) {
    throw std::invalid_argument("rm3_expand: fb_docs and fb_terms must be >= 1");
  }
  if (!(params.orig_weight >= 0.0 && params.orig_weight <= 1.0)) {
    throw std::invalid_argument("rm3_expand: orig_weight must lie in [0, 1]");
  }
  SparseVector out{query.id, {}};
  if (query.tokens.empty()) return out;

  std::map<TokenId, double> original;
  const double qlen = static_cast<double>(query.tokens.size());
  for (const auto& [t, c] : query_counts(query)) original[t] = c / qlen;

  Ranking initial = bm25_search(query, index, params.fb_docs, params.bm25);
  std::erase_if(initial.entries, [](const ScoredDoc& e) { return e.score <= 0.0; });

  std::vector<TermWeight> top;
  if (!initial.entries.empty() && params.orig_weight < 1.0) {
    double min_score = initial.entries.front().score;
    for (const auto& e : initial.entries) min_score = std::min(min_score, e.score);
    double total = 0.0;
    for (const auto& e : initial.entries) total += e.score - min_score;
    const double uniform = 1.0 / static_cast<double>(initial.entries.size());

    std::map<TokenId, double> relevance;
    for (const auto& e : initial.entries) {
      const double doc_weight = total > 0.0 ? (e.score - min_score) / total : uniform;
      if (doc_weight <= 0.0) continue;
      const DocIndex d = *index.find(e.doc_id);
      const double len = index.doc_len(d);
      if (len <= 0.0) continue;
      for (const auto& tc : index.doc_terms(d)) {
        relevance[tc.token] += doc_weight * static_cast<double>(tc.count) / len;
      }
    }
    for (const auto& [t, w] : relevance) {
      if (w > 0.0) top.push_back({t, w});
    }
    std::sort(top.begin(), top.end(), [](const TermWeight& a, const TermWeight& b) {
      if (a.weight != b.weight) return a.weight > b.weight;
      return a.token < b.token;
    });
    if (top.size() > params.fb_terms) top.resize(params.fb_terms);
  }

  double mass = 0.0;
  for (const auto& tw : top) mass += tw.weight;
  std::map<TokenId, double> mixed;
  if (mass > 0.0) {
    for (const auto& [t, p] : original) mixed[t] = params.orig_weight * p;
    for (const auto& tw : top) {
      mixed[tw.token] += (1.0 - params.orig_weight) * (tw.weight / mass);
    }
  } else {
    mixed = original;
  }

  std::vector<TermWeight> terms;
  terms.reserve(mixed.size());
  for (const auto& [t, w] : mixed) {
    if (w > 0.0) terms.push_back({t, w});
  }
  return SparseVector::from_terms(query.id, std::move(terms));
}

}  // namespace wackymeter
