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
#include "wackymeter/wackiness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/logger.h>

#include "wackymeter/errors.hpp"
#include "wackymeter/format.hpp"
#include "wackymeter/logging.hpp"
#include "wackymeter/parallel.hpp"

namespace wackymeter {

ExpansionRecord expansion_set(const TokenizedInput& input, const SparseVector& v,
                              const TokenSet& special_tokens) {
  if (input.id != v.id) {
    throw ValidationError(fmt::format(
        "expansion_set: input '{}' paired with vector '{}'", input.id, v.id));
  }
  ExpansionRecord rec;
  rec.input_id = input.id;
  for (TokenId t : input.tokens) {
    if (special_tokens.count(t) == 0) rec.t_orig.insert(t);
  }
  rec.t_model = v.support();
  std::set_difference(rec.t_model.begin(), rec.t_model.end(), rec.t_orig.begin(),
                      rec.t_orig.end(), std::inserter(rec.t_exp, rec.t_exp.end()));
  return rec;
}

namespace {

struct Neighbourhood {
  std::vector<DocIndex> docs;
  std::uint64_t total_len = 0;
};

Neighbourhood resolve(const Ranking& ranked_docs, const LexicalIndex& lexicon) {
  Neighbourhood n;
  n.docs.reserve(ranked_docs.size());
  for (const auto& e : ranked_docs.entries) {
    const auto d = lexicon.find(e.doc_id);
    if (!d) {
      throw ValidationError(fmt::format(
          "retrieved document '{}' is missing from the lexical corpus", e.doc_id));
    }
    n.docs.push_back(*d);
    n.total_len += lexicon.doc_len(*d);
  }
  return n;
}

double importance(TokenId token, const Neighbourhood& n, const LexicalIndex& lexicon) {
  if (n.total_len == 0) return 0.0;
  std::uint64_t tf = 0;
  for (DocIndex d : n.docs) tf += lexicon.count(token, d);
  if (tf == 0) return 0.0;
  const auto w = idf(token, lexicon.stats());
  if (!w) return 0.0;
  return (static_cast<double>(tf) / static_cast<double>(n.total_len)) * *w;
}

std::vector<const SparseVector*> align(const std::vector<TokenizedInput>& inputs,
                                       const std::vector<SparseVector>& vectors) {
  std::unordered_map<std::string_view, const SparseVector*> by_id;
  by_id.reserve(vectors.size());
  for (const auto& v : vectors) by_id.emplace(v.id, &v);
  std::vector<const SparseVector*> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) {
    auto it = by_id.find(in.id);
    if (it == by_id.end()) {
      throw ValidationError(fmt::format("input '{}' has no vector", in.id));
    }
    out.push_back(it->second);
  }
  if (vectors.size() > inputs.size()) {
    logger()->info("{} vector(s) without a matching input ignored",
                   vectors.size() - inputs.size());
  }
  return out;
}

}  // namespace

double lexical_importance(TokenId token, const Ranking& ranked_docs,
                          const LexicalIndex& lexicon) {
  if (ranked_docs.empty()) {
    throw std::invalid_argument("lexical_importance: empty document set");
  }
  return importance(token, resolve(ranked_docs, lexicon), lexicon);
}

std::vector<ExpansionRecord> expansion_records(
    const std::vector<TokenizedInput>& inputs,
    const std::vector<SparseVector>& vectors, const TokenSet& special_tokens) {
  const auto aligned = align(inputs, vectors);
  std::vector<ExpansionRecord> out;
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out.push_back(expansion_set(inputs[i], *aligned[i], special_tokens));
  }
  return out;
}

WackinessRun collect_importance(const std::vector<TokenizedInput>& inputs,
                                const std::vector<SparseVector>& vectors,
                                const Retriever& retriever,
                                const LexicalIndex& lexicon,
                                const WackinessOptions& options) {
  if (options.k < 1) throw std::invalid_argument("wackiness: k must be >= 1");
  const auto aligned = align(inputs, vectors);

  WackinessRun run;
  run.inputs.resize(inputs.size());
  parallel_for(inputs.size(), options.threads, [&](std::size_t i) {
    const SparseVector& v = *aligned[i];
    const ExpansionRecord rec = expansion_set(inputs[i], v, options.special_tokens);
    InputImportance& out = run.inputs[i];
    out.input_id = inputs[i].id;
    if (rec.t_exp.empty()) {
      // No expansion tokens means no samples; retrieval would be wasted.
      out.retrieved = true;
      return;
    }

    Ranking ranking;
    if (options.exclude_self) {
      ranking = retriever.search(v, options.k + 1);
      std::erase_if(ranking.entries,
                    [&](const ScoredDoc& e) { return e.doc_id == inputs[i].id; });
      if (ranking.entries.size() > options.k) ranking.entries.resize(options.k);
    } else {
      ranking = retriever.search(v, options.k);
    }
    if (ranking.empty()) return;

    out.retrieved = true;
    const Neighbourhood hood = resolve(ranking, lexicon);
    out.samples.reserve(rec.t_exp.size());
    for (TokenId t : rec.t_exp) out.samples.push_back({t, importance(t, hood, lexicon)});
  });

  for (const auto& in : run.inputs) {
    if (!in.retrieved) ++run.empty_rankings;
  }
  if (run.empty_rankings > 0) {
    logger()->warn("{} input(s) retrieved no documents and contribute no samples",
                   run.empty_rankings);
  }
  return run;
}

TokenWackinessTable build_table(const WackinessRun& run,
                                const std::vector<std::size_t>& selection) {
  struct Acc {
    double sum = 0.0;
    std::size_t count = 0;
  };
  std::map<TokenId, Acc> acc;
  TokenWackinessTable table;
  for (std::size_t idx : selection) {
    const auto& in = run.inputs.at(idx);
    if (!in.retrieved) ++table.empty_rankings;
    for (const auto& s : in.samples) {
      auto& a = acc[s.token];
      a.sum += s.value;
      ++a.count;
    }
  }
  if (acc.empty()) return table;

  bool first = true;
  for (const auto& [t, a] : acc) {
    WackinessRow row;
    row.occurrences = a.count;
    row.mean_importance = a.sum / static_cast<double>(a.count);
    if (first || row.mean_importance < table.norm_min) table.norm_min = row.mean_importance;
    if (first || row.mean_importance > table.norm_max) table.norm_max = row.mean_importance;
    first = false;
    table.rows.emplace(t, row);
  }
  const double span = table.norm_max - table.norm_min;
  for (auto& [t, row] : table.rows) {
    if (span > 0.0) {
      const double normalized = (row.mean_importance - table.norm_min) / span;
      row.wackiness = std::clamp(1.0 - normalized, 0.0, 1.0);
    } else {
      row.wackiness = 0.0;
    }
  }
  return table;
}

TokenWackinessTable build_table(const WackinessRun& run) {
  std::vector<std::size_t> all(run.inputs.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return build_table(run, all);
}

TokenWackinessTable wackiness_scores(const std::vector<TokenizedInput>& inputs,
                                     const std::vector<SparseVector>& vectors,
                                     const Retriever& retriever,
                                     const LexicalIndex& lexicon,
                                     const WackinessOptions& options) {
  return build_table(collect_importance(inputs, vectors, retriever, lexicon, options));
}

std::vector<std::pair<TokenId, double>> TokenWackinessTable::ranked() const {
  std::vector<std::pair<TokenId, double>> out;
  out.reserve(rows.size());
  for (const auto& [t, row] : rows) out.emplace_back(t, row.wackiness);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  return out;
}

std::vector<WackyToken> top_wacky_report(const TokenWackinessTable& table,
                                         const Vocabulary& vocab, std::size_t n) {
  if (n < 1) throw std::invalid_argument("top_wacky_report: n must be >= 1");
  std::vector<WackyToken> out;
  for (const auto& [t, w] : table.ranked()) {
    if (out.size() == n) break;
    out.push_back({t, vocab.contains(t) ? vocab.token(t) : fmt::format("#{}", t), w});
  }
  return out;
}

void write_table_csv(std::ostream& out, const TokenWackinessTable& table,
                     const Vocabulary& vocab) {
  out << "token_id,token_string,occurrences,mean_importance,wackiness\n";
  for (const auto& [t, w] : table.ranked()) {
    const auto& row = table.rows.at(t);
    out << t << ',' << csv_field(vocab.contains(t) ? vocab.token(t) : "") << ','
        << row.occurrences << ',' << format_real(row.mean_importance) << ','
        << format_real(row.wackiness) << '\n';
  }
}

void write_report_csv(std::ostream& out, const std::vector<WackyToken>& report) {
  out << "rank,token_id,token_string,wackiness\n";
  for (std::size_t i = 0; i < report.size(); ++i) {
    out << (i + 1) << ',' << report[i].token << ',' << csv_field(report[i].text) << ','
        << format_real(report[i].wackiness) << '\n';
  }
}

void write_importance(std::ostream& out, const WackinessRun& run,
                      const std::map<std::string, std::string>& extra) {
  nlohmann::json header(extra);
  header["format"] = "importance";
  out << header.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  for (const auto& in : run.inputs) {
    out << "{\"id\":" << json_string(in.input_id)
        << ",\"retrieved\":" << (in.retrieved ? "true" : "false") << ",\"samples\":{";
    for (std::size_t i = 0; i < in.samples.size(); ++i) {
      if (i > 0) out << ',';
      out << '"' << in.samples[i].token << "\":" << format_real(in.samples[i].value);
    }
    out << "}}\n";
  }
}

WackinessRun parse_importance(std::istream& in, const std::string& source) {
  using nlohmann::json;
  auto parse_line = [&](const std::string& line, std::size_t number) {
    try {
      return json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, number, fmt::format("invalid JSON: {}", e.what()));
    }
  };

  WackinessRun run;
  std::string line;
  std::size_t number = 0;
  bool header = false;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const json obj = parse_line(line, number);
    if (!obj.is_object()) throw ParseError(source, number, "expected a JSON object");
    if (!header) {
      auto f = obj.find("format");
      if (f == obj.end() || *f != "importance") {
        throw ParseError(source, number, "header must declare \"format\": \"importance\"");
      }
      header = true;
      continue;
    }
    auto id = obj.find("id");
    auto retrieved = obj.find("retrieved");
    auto samples = obj.find("samples");
    if (id == obj.end() || !id->is_string() || retrieved == obj.end() ||
        !retrieved->is_boolean() || samples == obj.end() || !samples->is_object()) {
      throw ParseError(source, number, "expected \"id\", \"retrieved\" and \"samples\"");
    }
    InputImportance rec;
    rec.input_id = id->get<std::string>();
    rec.retrieved = retrieved->get<bool>();
    if (!ids.insert(rec.input_id).second) {
      throw ValidationError(fmt::format("{}: duplicate input '{}'", source, rec.input_id));
    }
    for (const auto& [key, value] : samples->items()) {
      TokenId token = 0;
      const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), token);
      if (key.empty() || ec != std::errc{} || ptr != key.data() + key.size()) {
        throw ParseError(source, number, fmt::format("sample key '{}' is not a token id", key));
      }
      if (!value.is_number() || !std::isfinite(value.get<double>()) ||
          value.get<double>() < 0.0) {
        throw ValidationError(fmt::format("{}: input '{}': invalid importance for token {}",
                                          source, rec.input_id, token));
      }
      rec.samples.push_back({token, value.get<double>()});
    }
    std::sort(rec.samples.begin(), rec.samples.end(),
              [](const ImportanceSample& a, const ImportanceSample& b) { return a.token < b.token; });
    for (std::size_t i = 1; i < rec.samples.size(); ++i) {
      if (rec.samples[i - 1].token == rec.samples[i].token) {
        throw ValidationError(fmt::format("{}: input '{}' repeats token {}", source,
                                          rec.input_id, rec.samples[i].token));
      }
    }
    if (!rec.retrieved && !rec.samples.empty()) {
      throw ValidationError(fmt::format("{}: input '{}' has samples without retrieval",
                                        source, rec.input_id));
    }
    if (!rec.retrieved) ++run.empty_rankings;
    run.inputs.push_back(std::move(rec));
  }
  if (!header) throw ParseError(source, number, "missing header line");
  return run;
}

WackinessRun load_importance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  return parse_importance(in, path.string());
}

}  // namespace wackymeter
