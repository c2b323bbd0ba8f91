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
#include "wackymeter/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/logger.h>

#include "wackymeter/errors.hpp"
#include "wackymeter/format.hpp"
#include "wackymeter/logging.hpp"

namespace wackymeter {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  return in;
}

// Reads LF-terminated lines; a trailing CR is kept so callers can reject it.
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    fn(number, line);
  }
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

json parse_json_line(const std::string& line, const std::string& source,
                     std::size_t number) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(source, number, fmt::format("invalid JSON: {}", e.what()));
  }
}

std::string require_string(const json& obj, const char* key,
                           const std::string& source, std::size_t number) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError(source, number,
                     fmt::format("missing or non-string \"{}\"", key));
  }
  return it->get<std::string>();
}

TokenId to_token_id(const json& value, const std::string& source,
                    std::size_t number) {
  if (!value.is_number_integer() ||
      (value.is_number_integer() && !value.is_number_unsigned() &&
       value.get<std::int64_t>() < 0)) {
    throw ParseError(source, number, "token ids must be non-negative integers");
  }
  const auto raw = value.get<std::uint64_t>();
  if (raw > std::numeric_limits<TokenId>::max()) {
    throw ParseError(source, number, fmt::format("token id {} too large", raw));
  }
  return static_cast<TokenId>(raw);
}

void check_token_range(TokenId token, const Vocabulary* vocab,
                       const std::string& record_id) {
  if (vocab != nullptr && !vocab->contains(token)) {
    throw ValidationError(
        fmt::format("record '{}': token {} out of range (|V| = {})",
                    record_id, token, vocab->size()));
  }
}

// Parses a {"<tid>": float} object into ascending-token terms. Zeros are
// dropped; negatives are rejected when `non_negative`.
std::vector<TermWeight> parse_weights(const json& obj, bool non_negative,
                                      const Vocabulary* vocab,
                                      const std::string& record_id,
                                      const std::string& source,
                                      std::size_t number) {
  if (!obj.is_object()) {
    throw ParseError(source, number, "\"weights\" must be an object");
  }
  std::vector<TermWeight> terms;
  terms.reserve(obj.size());
  for (const auto& [key, value] : obj.items()) {
    TokenId token = 0;
    if (!parse_int(key, token)) {
      throw ParseError(source, number,
                       fmt::format("weight key '{}' is not a token id", key));
    }
    if (!value.is_number()) {
      throw ParseError(source, number,
                       fmt::format("weight for token {} is not a number", token));
    }
    const double w = value.get<double>();
    if (!std::isfinite(w)) {
      throw ValidationError(fmt::format(
          "record '{}': non-finite weight for token {}", record_id, token));
    }
    if (non_negative && w < 0.0) {
      throw ValidationError(
          fmt::format("record '{}': negative weight {} for token {} in an "
                      "activated vector",
                      record_id, format_real(w), token));
    }
    check_token_range(token, vocab, record_id);
    if (w != 0.0) terms.push_back({token, w});
  }
  std::sort(terms.begin(), terms.end(),
            [](const TermWeight& a, const TermWeight& b) {
              return a.token < b.token;
            });
  return terms;
}

void write_weights(std::ostream& out, const std::vector<TermWeight>& terms) {
  out << '{';
  bool first = true;
  for (const auto& t : terms) {
    if (!first) out << ',';
    first = false;
    out << '"' << t.token << "\":" << format_real(t.weight);
  }
  out << '}';
}

void check_unique_id(std::unordered_set<std::string>& seen,
                     const std::string& id, const std::string& source,
                     std::size_t number) {
  if (!seen.insert(id).second) {
    throw ValidationError(
        fmt::format("{}:{}: duplicate record id '{}'", source, number, id));
  }
}

}  // namespace

// --- vocabulary -------------------------------------------------------------

Vocabulary parse_vocabulary(std::istream& in, const std::string& source) {
  std::vector<std::pair<TokenId, std::string>> entries;
  for_each_line(in, [&](std::size_t number, std::string& line) {
    if (!line.empty() && line.back() == '\r') {
      throw ParseError(source, number, "CR line endings are not allowed");
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(source, number, "expected token_id<TAB>token_string");
    }
    TokenId id = 0;
    if (!parse_int(std::string_view(line).substr(0, tab), id)) {
      throw ParseError(source, number,
                       fmt::format("bad token id '{}'", line.substr(0, tab)));
    }
    entries.emplace_back(id, line.substr(tab + 1));
  });

  if (entries.empty()) {
    throw ValidationError(fmt::format("{}: vocabulary is empty", source));
  }
  std::vector<std::string> tokens(entries.size());
  std::vector<bool> filled(entries.size(), false);
  for (auto& [id, text] : entries) {
    if (id >= entries.size() || filled[id]) {
      throw ValidationError(fmt::format(
          "{}: token ids must be dense 0..{} (offending id {})", source,
          entries.size() - 1, id));
    }
    filled[id] = true;
    tokens[id] = std::move(text);
  }
  return Vocabulary(std::move(tokens));
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_vocabulary(in, path.string());
}

void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    out << i << '\t' << vocab.token(static_cast<TokenId>(i)) << '\n';
  }
}

// --- corpus -----------------------------------------------------------------

std::vector<TokenizedInput> parse_corpus(std::istream& in,
                                         const std::string& source,
                                         const Vocabulary* vocab) {
  std::vector<TokenizedInput> inputs;
  std::unordered_set<std::string> seen;
  std::size_t degenerate = 0;
  for_each_line(in, [&](std::size_t number, const std::string& line) {
    if (is_blank(line)) return;
    const json obj = parse_json_line(line, source, number);
    if (!obj.is_object()) throw ParseError(source, number, "expected an object");
    TokenizedInput input;
    input.id = require_string(obj, "id", source, number);
    auto tokens = obj.find("tokens");
    if (tokens == obj.end() || !tokens->is_array()) {
      throw ParseError(source, number, "missing \"tokens\" array");
    }
    input.tokens.reserve(tokens->size());
    for (const auto& t : *tokens) {
      const TokenId id = to_token_id(t, source, number);
      check_token_range(id, vocab, input.id);
      input.tokens.push_back(id);
    }
    if (auto text = obj.find("text"); text != obj.end() && !text->is_null()) {
      if (!text->is_string()) {
        throw ParseError(source, number, "\"text\" must be a string");
      }
      input.raw_text = text->get<std::string>();
    }
    check_unique_id(seen, input.id, source, number);
    if (input.degenerate()) ++degenerate;
    inputs.push_back(std::move(input));
  });
  if (degenerate > 0) {
    logger()->info("{}: {} input(s) with empty token sequences", source,
                   degenerate);
  }
  return inputs;
}

std::vector<TokenizedInput> load_corpus(const std::filesystem::path& path,
                                        const Vocabulary* vocab) {
  auto in = open_input(path);
  return parse_corpus(in, path.string(), vocab);
}

void write_corpus(std::ostream& out,
                  const std::vector<TokenizedInput>& inputs) {
  for (const auto& input : inputs) {
    out << "{\"id\":" << json_string(input.id);
    if (input.raw_text) out << ",\"text\":" << json_string(*input.raw_text);
    out << ",\"tokens\":[";
    for (std::size_t i = 0; i < input.tokens.size(); ++i) {
      if (i > 0) out << ',';
      out << input.tokens[i];
    }
    out << "]}\n";
  }
}

// --- vectors ----------------------------------------------------------------

namespace {

VectorHeader parse_header(const json& obj, const std::string& source) {
  if (!obj.is_object()) throw ParseError(source, 1, "header must be an object");
  VectorHeader header;
  bool have_format = false;
  bool have_activated = false;
  for (const auto& [key, value] : obj.items()) {
    if (key == "format") {
      if (value == "pooled") {
        header.format = VectorFormat::kPooled;
      } else if (value == "per_token") {
        header.format = VectorFormat::kPerToken;
      } else {
        throw ParseError(source, 1,
                         "header \"format\" must be \"pooled\" or \"per_token\"");
      }
      have_format = true;
    } else if (key == "activated") {
      if (!value.is_boolean()) {
        throw ParseError(source, 1, "header \"activated\" must be a boolean");
      }
      header.activated = value.get<bool>();
      have_activated = true;
    } else if (value.is_string()) {
      header.extra[key] = value.get<std::string>();
    } else {
      throw ParseError(source, 1,
                       fmt::format("header key \"{}\" must be a string", key));
    }
  }
  if (!have_format || !have_activated) {
    throw ParseError(source, 1,
                     "header must declare \"format\" and \"activated\"");
  }
  return header;
}

PerTokenMatrix parse_matrix(const json& obj, bool activated,
                            const Vocabulary* vocab, const std::string& source,
                            std::size_t number) {
  PerTokenMatrix m;
  m.id = require_string(obj, "id", source, number);
  auto rows = obj.find("rows");
  if (rows == obj.end() || !rows->is_array()) {
    throw ParseError(source, number, "missing \"rows\" array");
  }
  for (const auto& row : *rows) {
    if (!row.is_object()) throw ParseError(source, number, "row must be an object");
    auto pos = row.find("pos");
    if (pos == row.end() || !pos->is_number_integer()) {
      throw ParseError(source, number, "row needs an integer \"pos\"");
    }
    auto weights = row.find("weights");
    if (weights == row.end()) {
      throw ParseError(source, number, "row needs \"weights\"");
    }
    TokenRow r;
    r.position = pos->get<int>();
    if (!m.rows.empty() && r.position <= m.rows.back().position) {
      throw ValidationError(fmt::format(
          "record '{}': row positions must be strictly increasing", m.id));
    }
    r.weights = parse_weights(*weights, activated, vocab, m.id, source, number);
    m.rows.push_back(std::move(r));
  }
  if (auto cls = obj.find("cls_pos"); cls != obj.end() && !cls->is_null()) {
    if (!cls->is_number_integer()) {
      throw ParseError(source, number, "\"cls_pos\" must be an integer");
    }
    m.cls_position = cls->get<int>();
    if (m.row_at(*m.cls_position) == nullptr) {
      throw ValidationError(fmt::format(
          "record '{}': cls_pos {} does not name a row", m.id, *m.cls_position));
    }
  }
  return m;
}

}  // namespace

VectorFile parse_vectors(std::istream& in, const std::string& source,
                         const Vocabulary* vocab) {
  VectorFile file;
  bool have_header = false;
  std::unordered_set<std::string> seen;
  for_each_line(in, [&](std::size_t number, const std::string& line) {
    if (is_blank(line)) return;
    const json obj = parse_json_line(line, source, number);
    if (!have_header) {
      file.header = parse_header(obj, source);
      have_header = true;
      return;
    }
    if (!obj.is_object()) throw ParseError(source, number, "expected an object");
    if (file.header.format == VectorFormat::kPooled) {
      SparseVector v;
      v.id = require_string(obj, "id", source, number);
      auto weights = obj.find("weights");
      if (weights == obj.end()) {
        throw ParseError(source, number, "missing \"weights\"");
      }
      // Pooled vectors are SparseVectors, which are non-negative whatever
      // the header says.
      v.terms = parse_weights(*weights, true, vocab, v.id, source, number);
      check_unique_id(seen, v.id, source, number);
      file.pooled.push_back(std::move(v));
    } else {
      auto m = parse_matrix(obj, file.header.activated, vocab, source, number);
      check_unique_id(seen, m.id, source, number);
      file.per_token.push_back(std::move(m));
    }
  });
  if (!have_header) {
    throw ParseError(source, 0, "missing header line");
  }
  return file;
}

VectorFile load_vectors(const std::filesystem::path& path,
                        const Vocabulary* vocab) {
  auto in = open_input(path);
  return parse_vectors(in, path.string(), vocab);
}

std::vector<SparseVector> load_pooled_vectors(const std::filesystem::path& path,
                                              const Vocabulary* vocab) {
  auto file = load_vectors(path, vocab);
  if (file.header.format != VectorFormat::kPooled) {
    throw ValidationError(fmt::format(
        "{}: expected pooled vectors, found per_token (run `pool` first)",
        path.string()));
  }
  return std::move(file.pooled);
}

void write_vectors(std::ostream& out, const VectorFile& file) {
  json header = json::object();
  for (const auto& [k, v] : file.header.extra) header[k] = v;
  header["format"] =
      file.header.format == VectorFormat::kPooled ? "pooled" : "per_token";
  header["activated"] = file.header.activated;
  out << header.dump() << '\n';

  if (file.header.format == VectorFormat::kPooled) {
    for (const auto& v : file.pooled) {
      out << "{\"id\":" << json_string(v.id) << ",\"weights\":";
      write_weights(out, v.terms);
      out << "}\n";
    }
    return;
  }
  for (const auto& m : file.per_token) {
    out << '{';
    if (m.cls_position) out << "\"cls_pos\":" << *m.cls_position << ',';
    out << "\"id\":" << json_string(m.id) << ",\"rows\":[";
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
      if (i > 0) out << ',';
      out << "{\"pos\":" << m.rows[i].position << ",\"weights\":";
      write_weights(out, m.rows[i].weights);
      out << '}';
    }
    out << "]}\n";
  }
}

void write_pooled_vectors(std::ostream& out,
                          const std::vector<SparseVector>& vectors,
                          std::map<std::string, std::string> extra) {
  VectorFile file;
  file.header.format = VectorFormat::kPooled;
  file.header.activated = true;
  file.header.extra = std::move(extra);
  file.pooled = vectors;
  write_vectors(out, file);
}

// --- qrels / runs -----------------------------------------------------------

namespace {
std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}
}  // namespace

Qrels parse_qrels(std::istream& in, const std::string& source) {
  Qrels qrels;
  for_each_line(in, [&](std::size_t number, const std::string& line) {
    if (is_blank(line)) return;
    const auto f = split_ws(line);
    if (f.size() != 4) {
      throw ParseError(source, number, "expected 'qid 0 docid grade'");
    }
    int grade = 0;
    if (!parse_int(f[3], grade)) {
      throw ParseError(source, number,
                       fmt::format("bad grade '{}'", std::string(f[3])));
    }
    qrels.add(std::string(f[0]), std::string(f[2]), grade);
  });
  return qrels;
}

Qrels load_qrels(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_qrels(in, path.string());
}

void write_qrels(std::ostream& out, const Qrels& qrels) {
  for (const auto& [qid, docs] : qrels.all()) {
    for (const auto& [doc, grade] : docs) {
      out << qid << " 0 " << doc << ' ' << grade << '\n';
    }
  }
}

std::vector<Ranking> parse_run(std::istream& in, const std::string& source) {
  std::vector<Ranking> run;
  std::map<std::string, std::size_t> slot;
  for_each_line(in, [&](std::size_t number, const std::string& line) {
    if (is_blank(line)) return;
    const auto f = split_ws(line);
    if (f.size() != 6) {
      throw ParseError(source, number, "expected 'qid Q0 docid rank score tag'");
    }
    // Order comes from the scores, as in trec_eval; the rank only has to
    // be well formed.
    long long rank = 0;
    auto [rank_end, rank_ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), rank);
    if (rank_ec != std::errc{} || rank_end != f[3].data() + f[3].size()) {
      throw ParseError(source, number, fmt::format("bad rank '{}'", std::string(f[3])));
    }
    double score = 0.0;
    auto [ptr, ec] = std::from_chars(f[4].data(), f[4].data() + f[4].size(), score);
    if (ec != std::errc{} || ptr != f[4].data() + f[4].size() ||
        !std::isfinite(score)) {
      throw ParseError(source, number,
                       fmt::format("bad score '{}'", std::string(f[4])));
    }
    const std::string qid(f[0]);
    auto [it, inserted] = slot.try_emplace(qid, run.size());
    if (inserted) run.push_back(Ranking{qid, {}});
    run[it->second].entries.push_back({std::string(f[2]), score});
  });
  for (auto& r : run) canonicalize(r);
  return run;
}

std::vector<Ranking> load_run(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_run(in, path.string());
}

void write_run(std::ostream& out, const std::vector<Ranking>& run,
               const std::string& tag) {
  for (const auto& r : run) {
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      out << r.query_id << " Q0 " << r.entries[i].doc_id << ' ' << (i + 1)
          << ' ' << format_real(r.entries[i].score) << ' ' << tag << '\n';
    }
  }
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << bytes;
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace wackymeter
