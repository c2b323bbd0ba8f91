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
#include "wackymeter/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

#include "wackymeter/errors.hpp"

namespace wackymeter {

ParseError::ParseError(const std::string& source, std::size_t line,
                       const std::string& what)
    : Error(line > 0 ? fmt::format("{}:{}: {}", source, line, what)
                     : fmt::format("{}: {}", source, what)),
      source_(source),
      line_(line) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens)
    : tokens_(std::move(tokens)) {}

std::optional<TokenId> Vocabulary::find(std::string_view text) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i] == text) return static_cast<TokenId>(i);
  }
  return std::nullopt;
}

TokenSet TokenizedInput::distinct_tokens() const {
  return TokenSet(tokens.begin(), tokens.end());
}

SparseVector SparseVector::from_terms(std::string id,
                                      std::vector<TermWeight> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const TermWeight& a, const TermWeight& b) {
              return a.token < b.token;
            });
  SparseVector v{std::move(id), {}};
  v.terms.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (i > 0 && terms[i - 1].token == t.token) {
      throw ValidationError(fmt::format("vector '{}': duplicate token {}",
                                        v.id, t.token));
    }
    if (!std::isfinite(t.weight)) {
      throw ValidationError(fmt::format(
          "vector '{}': non-finite weight for token {}", v.id, t.token));
    }
    if (t.weight < 0.0) {
      throw ValidationError(fmt::format(
          "vector '{}': negative weight {} for token {}", v.id, t.weight,
          t.token));
    }
    if (t.weight > 0.0) v.terms.push_back(t);
  }
  return v;
}

namespace {
auto find_term(const std::vector<TermWeight>& terms, TokenId token) {
  return std::lower_bound(
      terms.begin(), terms.end(), token,
      [](const TermWeight& t, TokenId tok) { return t.token < tok; });
}
}  // namespace

double SparseVector::weight(TokenId token) const noexcept {
  auto it = find_term(terms, token);
  return (it != terms.end() && it->token == token) ? it->weight : 0.0;
}

bool SparseVector::contains(TokenId token) const noexcept {
  auto it = find_term(terms, token);
  return it != terms.end() && it->token == token;
}

TokenSet SparseVector::support() const {
  TokenSet out;
  for (const auto& t : terms) out.insert(out.end(), t.token);
  return out;
}

const TokenRow* PerTokenMatrix::row_at(int position) const noexcept {
  for (const auto& r : rows) {
    if (r.position == position) return &r;
  }
  return nullptr;
}

void Qrels::add(const std::string& query_id, const std::string& doc_id,
                int grade) {
  if (grade < 0) {
    throw ValidationError(fmt::format(
        "qrels: negative grade {} for ({}, {})", grade, query_id, doc_id));
  }
  judgments_[query_id][doc_id] = grade;
}

const std::map<std::string, int>* Qrels::judgments(
    const std::string& query_id) const {
  auto it = judgments_.find(query_id);
  return it == judgments_.end() ? nullptr : &it->second;
}

int Qrels::grade(const std::string& query_id,
                 const std::string& doc_id) const {
  const auto* j = judgments(query_id);
  if (j == nullptr) return 0;
  auto it = j->find(doc_id);
  return it == j->end() ? 0 : it->second;
}

void canonicalize(Ranking& ranking) {
  std::sort(ranking.entries.begin(), ranking.entries.end(), ranks_before);
  std::unordered_set<std::string_view> seen;
  for (const auto& e : ranking.entries) {
    if (!seen.insert(e.doc_id).second) {
      throw ValidationError(fmt::format(
          "ranking '{}': duplicate doc id '{}'", ranking.query_id, e.doc_id));
    }
  }
}

}  // namespace wackymeter
