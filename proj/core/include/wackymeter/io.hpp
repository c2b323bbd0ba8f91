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
#pragma once

// Interchange formats.
//
//   vocabulary  TSV   token_id<TAB>token_string, LF line endings
//   corpus      JSONL {"id": str, "tokens": [int, ...], "text": str?}
//   vectors     JSONL first line {"format": "pooled"|"per_token",
//                                 "activated": bool, ...}
//               pooled    {"id": str, "weights": {"<tid>": float}}
//               per_token {"id": str, "rows": [{"pos": int,
//                          "weights": {...}}], "cls_pos": int?}
//   qrels       TREC  qid 0 docid grade
//   run         TREC  qid Q0 docid rank score tag
//
// Loaders either return a fully validated value or throw (ParseError for
// syntax, ValidationError for invariants, IoError for the filesystem). They
// never return partial results. Writers emit the canonical form: sorted
// object keys, weights by ascending token id, reals via format_real, so
// write(load(x)) == x byte for byte for canonical x.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wackymeter/types.hpp"

namespace wackymeter {

enum class VectorFormat { kPooled, kPerToken };

struct VectorHeader {
  VectorFormat format = VectorFormat::kPooled;
  bool activated = true;
  // Additional string-valued header keys, e.g. "aggregation".
  std::map<std::string, std::string> extra;
};

struct VectorFile {
  VectorHeader header;
  std::vector<SparseVector> pooled;       // when format == kPooled
  std::vector<PerTokenMatrix> per_token;  // when format == kPerToken
};

Vocabulary parse_vocabulary(std::istream& in, const std::string& source);
Vocabulary load_vocabulary(const std::filesystem::path& path);
void write_vocabulary(std::ostream& out, const Vocabulary& vocab);

// `vocab` may be null to skip range checks.
std::vector<TokenizedInput> parse_corpus(std::istream& in,
                                         const std::string& source,
                                         const Vocabulary* vocab);
std::vector<TokenizedInput> load_corpus(const std::filesystem::path& path,
                                        const Vocabulary* vocab);
void write_corpus(std::ostream& out, const std::vector<TokenizedInput>& inputs);

VectorFile parse_vectors(std::istream& in, const std::string& source,
                         const Vocabulary* vocab);
VectorFile load_vectors(const std::filesystem::path& path,
                        const Vocabulary* vocab);
// Loads a file that must hold pooled vectors.
std::vector<SparseVector> load_pooled_vectors(const std::filesystem::path& path,
                                              const Vocabulary* vocab);
void write_vectors(std::ostream& out, const VectorFile& file);
void write_pooled_vectors(std::ostream& out,
                          const std::vector<SparseVector>& vectors,
                          std::map<std::string, std::string> extra = {});

Qrels parse_qrels(std::istream& in, const std::string& source);
Qrels load_qrels(const std::filesystem::path& path);
void write_qrels(std::ostream& out, const Qrels& qrels);

// Rankings in order of first appearance, each canonicalized.
std::vector<Ranking> parse_run(std::istream& in, const std::string& source);
std::vector<Ranking> load_run(const std::filesystem::path& path);
void write_run(std::ostream& out, const std::vector<Ranking>& run,
               const std::string& tag);

// Whole-file helpers used by the CLI.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace wackymeter
