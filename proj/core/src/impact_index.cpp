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
#include "wackymeter/impact_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "binary_io.hpp"
#include "wackymeter/errors.hpp"
#include "wackymeter/io.hpp"
#include "wackymeter/manifest.hpp"

namespace wackymeter {

namespace {

constexpr std::string_view kMagic = "WMIMPIDX";
constexpr std::uint32_t kVersion = 1;
const std::vector<ImpactPosting> kNoPostings;

void check_k(std::size_t k) {
  if (k == 0) throw std::invalid_argument("search: k must be >= 1");
}

struct Candidate {
  std::uint32_t doc;
  double score;
};

// Selects the top k candidates in canonical order. `doc` numbers must
// follow doc-id order.
void select_top(std::vector<Candidate>& cands, std::size_t k) {
  auto before = [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc < b.doc;
  };
  if (cands.size() > k) {
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(k),
                      cands.end(), before);
    cands.resize(k);
  } else {
    std::sort(cands.begin(), cands.end(), before);
  }
}

}  // namespace

ImpactIndex ImpactIndex::build(const std::vector<SparseVector>& docs) {
  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return docs[a].id < docs[b].id; });

  ImpactIndex index;
  index.doc_ids_.reserve(docs.size());
  TokenId max_token = 0;
  bool any = false;
  for (std::size_t i : order) {
    if (!index.doc_ids_.empty() && index.doc_ids_.back() == docs[i].id) {
      throw ValidationError(fmt::format("duplicate document id '{}'", docs[i].id));
    }
    index.doc_ids_.push_back(docs[i].id);
    if (!docs[i].terms.empty()) {
      max_token = std::max(max_token, docs[i].terms.back().token);
      any = true;
    }
  }
  index.postings_.assign(any ? static_cast<std::size_t>(max_token) + 1 : 0, {});
  for (std::uint32_t d = 0; d < order.size(); ++d) {
    for (const auto& tw : docs[order[d]].terms) {
      if (!(tw.weight > 0.0)) {
        throw ValidationError(fmt::format(
            "document '{}': non-positive weight for token {}", docs[order[d]].id,
            tw.token));
      }
      index.postings_[tw.token].push_back({d, tw.weight});
    }
  }
  return index;
}

const std::vector<ImpactPosting>& ImpactIndex::postings(TokenId token) const noexcept {
  return token < postings_.size() ? postings_[token] : kNoPostings;
}

Ranking ImpactIndex::search(const SparseVector& query, std::size_t k) const {
  check_k(k);
  Ranking ranking{query.id, {}};
  if (query.empty()) return ranking;

  std::vector<double> acc(doc_ids_.size(), 0.0);
  std::vector<char> seen(doc_ids_.size(), 0);
  std::vector<std::uint32_t> touched;
  for (const auto& [token, qw] : query.terms) {
    for (const auto& [doc, dw] : postings(token)) {
      if (!seen[doc]) {
        seen[doc] = 1;
        touched.push_back(doc);
      }
      acc[doc] += qw * dw;
    }
  }

  std::vector<Candidate> cands;
  cands.reserve(touched.size());
  for (std::uint32_t d : touched) {
    if (acc[d] > 0.0) cands.push_back({d, acc[d]});
  }
  select_top(cands, k);
  ranking.entries.reserve(cands.size());
  for (const auto& c : cands) ranking.entries.push_back({doc_ids_[c.doc], c.score});
  return ranking;
}

std::vector<std::pair<TokenId, std::size_t>> ImpactIndex::posting_lengths() const {
  std::vector<std::pair<TokenId, std::size_t>> out;
  for (std::size_t t = 0; t < postings_.size(); ++t) {
    if (!postings_[t].empty()) out.emplace_back(static_cast<TokenId>(t), postings_[t].size());
  }
  return out;
}

std::string ImpactIndex::serialize() const {
  detail::BinaryWriter w;
  w.bytes(kMagic);
  w.u32(kVersion);
  w.u64(doc_ids_.size());
  for (const auto& id : doc_ids_) w.str(id);
  std::uint64_t lists = 0;
  for (const auto& p : postings_) lists += p.empty() ? 0 : 1;
  w.u64(lists);
  for (std::size_t t = 0; t < postings_.size(); ++t) {
    if (postings_[t].empty()) continue;
    w.u32(static_cast<std::uint32_t>(t));
    w.u64(postings_[t].size());
    for (const auto& p : postings_[t]) {
      w.u32(p.doc);
      w.f64(p.weight);
    }
  }
  return w.take();
}

ImpactIndex ImpactIndex::deserialize(const std::string& bytes,
                                     const std::string& source) {
  detail::BinaryReader r(bytes, source);
  r.expect_magic(kMagic, kVersion);
  ImpactIndex index;
  const auto docs = r.u64();
  for (std::uint64_t d = 0; d < docs; ++d) {
    index.doc_ids_.push_back(r.str());
    if (d > 0 && !(index.doc_ids_[d - 1] < index.doc_ids_[d])) {
      r.fail("document ids out of order");
    }
  }
  const auto lists = r.u64();
  std::int64_t last_token = -1;
  for (std::uint64_t l = 0; l < lists; ++l) {
    const TokenId token = r.u32();
    if (static_cast<std::int64_t>(token) <= last_token) r.fail("token lists out of order");
    last_token = token;
    const auto n = r.u64();
    if (index.postings_.size() <= token) index.postings_.resize(static_cast<std::size_t>(token) + 1);
    auto& plist = index.postings_[token];
    for (std::uint64_t i = 0; i < n; ++i) {
      ImpactPosting p{r.u32(), r.f64()};
      if (p.doc >= docs || !(p.weight > 0.0) || !std::isfinite(p.weight) ||
          (!plist.empty() && plist.back().doc >= p.doc)) {
        r.fail("malformed posting list");
      }
      plist.push_back(p);
    }
  }
  if (!r.done()) r.fail("trailing bytes after index payload");
  return index;
}

std::string ImpactIndex::checksum() const { return sha256_hex(serialize()); }

void ImpactIndex::save(const std::filesystem::path& path) const {
  write_file(path, serialize());
}

ImpactIndex ImpactIndex::load(const std::filesystem::path& path) {
  return deserialize(read_file(path), path.string());
}

Ranking exhaustive_search(const SparseVector& query,
                          const std::vector<SparseVector>& docs, std::size_t k) {
  check_k(k);
  Ranking ranking{query.id, {}};
  if (query.empty()) return ranking;

  for (const auto& doc : docs) {
    double score = 0.0;
    auto q = query.terms.begin();
    auto d = doc.terms.begin();
    while (q != query.terms.end() && d != doc.terms.end()) {
      if (q->token < d->token) {
        ++q;
      } else if (d->token < q->token) {
        ++d;
      } else {
        score += q->weight * d->weight;
        ++q;
        ++d;
      }
    }
    if (score > 0.0) ranking.entries.push_back({doc.id, score});
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(), ranks_before);
  if (ranking.entries.size() > k) ranking.entries.resize(k);
  return ranking;
}

}  // namespace wackymeter
