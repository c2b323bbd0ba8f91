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
#include "wackymeter/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "wackymeter/errors.hpp"
#include "wackymeter/format.hpp"
#include "wackymeter/random.hpp"

namespace wackymeter {

ExpansionProfile ExpansionProfile::mixed(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("mixed(p) requires 0 <= p <= 1");
  }
  return {p};
}

ExpansionProfile ExpansionProfile::parse(const std::string& text) {
  if (text == "lexical-overlap") return lexical_overlap();
  if (text == "random-token") return random_token();
  if (text.size() > 7 && text.rfind("mixed(", 0) == 0 && text.back() == ')') {
    const std::string inner = text.substr(6, text.size() - 7);
    double p = 0.0;
    auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), p);
    if (ec == std::errc{} && ptr == inner.data() + inner.size()) {
      return mixed(p);
    }
  }
  throw std::invalid_argument(fmt::format(
      "unknown expansion profile '{}' (expected lexical-overlap, "
      "random-token or mixed(p))",
      text));
}

std::string ExpansionProfile::name() const {
  if (random_fraction == 0.0) return "lexical-overlap";
  if (random_fraction == 1.0) return "random-token";
  return fmt::format("mixed({})", format_real(random_fraction));
}

namespace {

constexpr double kWeightQuantum = 0.125;

struct Layout {
  std::size_t vocab_size;
  std::size_t common_count;  // background tokens [0, common_count)
  std::size_t topic_begin;
  std::size_t topic_count;
  std::size_t block_size;  // tokens per topic

  TokenId topic_token(std::size_t topic, std::size_t rank) const {
    return static_cast<TokenId>(topic_begin + topic * block_size + rank);
  }
};

Layout make_layout(const SyntheticConfig& cfg) {
  Layout l{};
  l.vocab_size = cfg.vocab_size;
  l.common_count = cfg.vocab_size / 10;
  l.topic_begin = l.common_count;
  std::size_t region = cfg.vocab_size - l.common_count;
  if (region == 0) {
    l.topic_begin = 0;
    region = cfg.vocab_size;
  }
  const std::size_t wanted = std::max<std::size_t>(
      1, std::min(cfg.vocab_size / 40, std::max<std::size_t>(1, cfg.corpus_size / 4)));
  l.topic_count = std::min(wanted, region);
  l.block_size = region / l.topic_count;
  return l;
}

std::string padded_id(char prefix, std::size_t i, std::size_t count) {
  const int width = static_cast<int>(fmt::format("{}", count > 0 ? count - 1 : 0).size());
  return fmt::format("{}{:0{}}", prefix, i, width);
}

// Skewed rank in [0, n): a squared uniform favours the head of the block.
std::size_t skewed_rank(Rng& rng, std::size_t n) {
  const double u = rng.uniform();
  return std::min(n - 1, static_cast<std::size_t>(u * u * static_cast<double>(n)));
}

double quantized_weight(Rng& rng, int lo_steps, int hi_steps) {
  return static_cast<double>(rng.between(lo_steps, hi_steps)) * kWeightQuantum;
}

struct Expander {
  const Layout& layout;
  const std::vector<TokenizedInput>& corpus;
  const std::vector<std::vector<std::size_t>>& topic_docs;
  ExpansionProfile profile;

  // Original tokens receive weights in [0.5, 2]; expansions in [0.25, 1.5].
  SparseVector expand(const TokenizedInput& input, std::size_t topic,
                      Rng& rng, int min_expansions, int max_expansions,
                      InjectionLog& log) const {
    std::map<TokenId, double> weights;
    for (TokenId t : input.distinct_tokens()) {
      weights[t] = quantized_weight(rng, 4, 16);
    }
    const auto slots = rng.between(min_expansions, max_expansions);
    const auto& same_topic = topic_docs[topic];
    for (std::int64_t s = 0; s < slots; ++s) {
      const bool random = rng.uniform() < profile.random_fraction;
      for (int attempt = 0; attempt < 8; ++attempt) {
        TokenId candidate = 0;
        if (random) {
          candidate = static_cast<TokenId>(rng.below(layout.vocab_size));
        } else {
          const auto& doc = corpus[same_topic[rng.below(same_topic.size())]];
          if (doc.tokens.empty()) continue;
          candidate = doc.tokens[rng.below(doc.tokens.size())];
        }
        if (weights.count(candidate) > 0) continue;
        weights[candidate] = quantized_weight(rng, 2, 12);
        log.tokens.push_back(
            {candidate, random ? ExpansionSource::kRandom : ExpansionSource::kLexical});
        break;
      }
    }
    std::vector<TermWeight> terms;
    terms.reserve(weights.size());
    for (const auto& [t, w] : weights) terms.push_back({t, w});
    return SparseVector::from_terms(input.id, std::move(terms));
  }
};

}  // namespace

SyntheticModel generate_synthetic_model(const SyntheticConfig& cfg) {
  if (cfg.vocab_size < 1 || cfg.corpus_size < 1 || cfg.query_count < 1) {
    throw std::invalid_argument(
        "synthetic model sizes (vocab, corpus, queries) must all be >= 1");
  }
  if (!(cfg.profile.random_fraction >= 0.0 && cfg.profile.random_fraction <= 1.0)) {
    throw std::invalid_argument("expansion profile fraction must lie in [0, 1]");
  }
  const Layout layout = make_layout(cfg);
  SyntheticModel model;

  std::vector<std::string> tokens(cfg.vocab_size);
  for (std::size_t i = 0; i < cfg.vocab_size; ++i) {
    tokens[i] = i < layout.common_count ? fmt::format("common{}", i)
                                        : fmt::format("w{}", i);
  }
  model.vocab = Vocabulary(std::move(tokens));

  // Corpus: topic-conditioned bags of tokens.
  Rng corpus_rng = Rng::derive(cfg.seed, {1});
  std::vector<std::size_t> doc_topic(cfg.corpus_size);
  std::vector<std::vector<std::size_t>> topic_docs(layout.topic_count);
  model.corpus.reserve(cfg.corpus_size);
  for (std::size_t d = 0; d < cfg.corpus_size; ++d) {
    const std::size_t topic = corpus_rng.below(layout.topic_count);
    doc_topic[d] = topic;
    topic_docs[topic].push_back(d);
    TokenizedInput doc{padded_id('d', d, cfg.corpus_size), {}, std::nullopt};
    const auto length = corpus_rng.between(8, 40);
    doc.tokens.reserve(static_cast<std::size_t>(length));
    for (std::int64_t i = 0; i < length; ++i) {
      const bool background =
          layout.common_count > 0 && corpus_rng.uniform() >= 0.75;
      doc.tokens.push_back(
          background ? static_cast<TokenId>(skewed_rank(corpus_rng, layout.common_count))
                     : layout.topic_token(topic, skewed_rank(corpus_rng, layout.block_size)));
    }
    model.corpus.push_back(std::move(doc));
  }
  // An empty topic would leave lexical-overlap nothing to draw from; fall
  // back to the whole corpus for it.
  std::vector<std::size_t> all_docs(cfg.corpus_size);
  for (std::size_t d = 0; d < cfg.corpus_size; ++d) all_docs[d] = d;
  for (auto& docs : topic_docs) {
    if (docs.empty()) docs = all_docs;
  }

  // Queries: short samples of a source document, which is the one relevant
  // document.
  Rng query_rng = Rng::derive(cfg.seed, {2});
  std::vector<std::size_t> query_topic(cfg.query_count);
  model.queries.reserve(cfg.query_count);
  for (std::size_t q = 0; q < cfg.query_count; ++q) {
    const std::size_t source = query_rng.below(cfg.corpus_size);
    query_topic[q] = doc_topic[source];
    const auto& doc = model.corpus[source];
    TokenizedInput query{padded_id('q', q, cfg.query_count), {}, std::nullopt};
    const auto length = static_cast<std::size_t>(query_rng.between(2, 5));
    for (std::size_t idx : sample_without_replacement(query_rng, doc.tokens.size(), length)) {
      query.tokens.push_back(doc.tokens[idx]);
    }
    model.qrels.add(query.id, doc.id, 1);
    model.queries.push_back(std::move(query));
  }

  Expander expander{layout, model.corpus, topic_docs, cfg.profile};
  model.doc_vectors.reserve(cfg.corpus_size);
  for (std::size_t d = 0; d < cfg.corpus_size; ++d) {
    Rng rng = Rng::derive(cfg.seed, {3, d});
    InjectionLog log{model.corpus[d].id, {}};
    model.doc_vectors.push_back(
        expander.expand(model.corpus[d], doc_topic[d], rng, 4, 10, log));
    model.doc_injections.push_back(std::move(log));
  }
  model.query_vectors.reserve(cfg.query_count);
  for (std::size_t q = 0; q < cfg.query_count; ++q) {
    Rng rng = Rng::derive(cfg.seed, {4, q});
    InjectionLog log{model.queries[q].id, {}};
    model.query_vectors.push_back(
        expander.expand(model.queries[q], query_topic[q], rng, 3, 8, log));
    model.query_injections.push_back(std::move(log));
  }
  return model;
}

}  // namespace wackymeter
