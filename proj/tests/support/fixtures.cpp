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
#include "fixtures.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>
#include <unistd.h>

namespace wackymeter::testing {

SparseVector vec(const std::string& id,
                 std::initializer_list<std::pair<TokenId, double>> weights) {
  std::vector<TermWeight> terms;
  for (const auto& [t, w] : weights) terms.push_back({t, w});
  return SparseVector::from_terms(id, std::move(terms));
}

TokenizedInput input(const std::string& id, std::vector<TokenId> tokens) {
  return TokenizedInput{id, std::move(tokens), std::nullopt};
}

SparseVector random_vector(Rng& rng, const std::string& id, std::size_t vocab,
                           double density) {
  std::vector<TermWeight> terms;
  for (std::size_t t = 0; t < vocab; ++t) {
    if (rng.uniform() < density) {
      terms.push_back({static_cast<TokenId>(t), 0.25 * static_cast<double>(rng.between(1, 8))});
    }
  }
  return SparseVector::from_terms(id, std::move(terms));
}

SyntheticModel small_model(std::uint64_t seed, const ExpansionProfile& profile,
                           std::size_t vocab, std::size_t docs, std::size_t queries) {
  SyntheticConfig cfg;
  cfg.vocab_size = vocab;
  cfg.corpus_size = docs;
  cfg.query_count = queries;
  cfg.profile = profile;
  cfg.seed = seed;
  return generate_synthetic_model(cfg);
}

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("wackymeter-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spit(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::map<std::string, std::string> snapshot_dir(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      out[std::filesystem::relative(e.path(), dir).string()] = slurp(e.path());
    }
  }
  return out;
}

int run_quiet(const std::string& command) {
  const int status = std::system((command + " >/dev/null 2>&1").c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

int run_cli(const std::string& cli, const std::filesystem::path& dir, const std::string& args) {
  return run_quiet("cd '" + dir.string() + "' && '" + cli + "' " + args);
}

const char* const kPerTokenFixture =
    "{\"activated\":false,\"format\":\"per_token\"}\n"
    "{\"cls_pos\":0,\"id\":\"q1\",\"rows\":[{\"pos\":0,\"weights\":{\"1\":1.718281828459045,"
    "\"2\":-1}},{\"pos\":1,\"weights\":{\"1\":0.5,\"3\":3}}]}\n";

std::string run_pipeline(const std::string& cli, const std::filesystem::path& dir,
                         unsigned threads) {
  const std::string t = " --threads " + std::to_string(threads);
  spit(dir / "per_token.jsonl", kPerTokenFixture);
  const std::vector<std::string> steps{
      "synth --vocab-size 300 --corpus-size 120 --query-count 20 --profile 'mixed(0.5)'"
      " --out synth",
      "synth --vocab-size 300 --corpus-size 120 --query-count 20 --profile random-token"
      " --out synth_r",
      "index --vocab synth/vocab.tsv --corpus synth/corpus.jsonl"
      " --vectors synth/doc_vectors.jsonl --out index",
      "pool --vectors per_token.jsonl --aggregation sum --out pool",
      "search --retriever impact --index index/impact.idx"
      " --query-vectors synth/query_vectors.jsonl --k 100 --out search_impact",
      "search --retriever bm25 --index index/lexical.idx --queries synth/queries.jsonl"
      " --out search_bm25",
      "search --retriever rm3 --corpus synth/corpus.jsonl --queries synth/queries.jsonl"
      " --fb-terms 5 --out search_rm3",
      "wackiness --vocab synth/vocab.tsv --corpus synth/corpus.jsonl"
      " --vectors synth/doc_vectors.jsonl --queries synth/queries.jsonl"
      " --query-vectors synth/query_vectors.jsonl --out wack",
      "wackiness --corpus synth_r/corpus.jsonl --vectors synth_r/doc_vectors.jsonl"
      " --queries synth_r/queries.jsonl --query-vectors synth_r/query_vectors.jsonl"
      " --out wack_r",
      "wackiness --corpus synth/corpus.jsonl --index index/impact.idx"
      " --vectors synth/doc_vectors.jsonl --exclude-self --out wack_docs",
      "curve --samples wack/importance.jsonl --bins 20 --out curve",
      "curve --compare --model mixed=wack/importance.jsonl"
      " --model random=wack_r/importance.jsonl --bins 20 --repeats 5 --out compare",
      "ablate --queries synth/queries.jsonl --query-vectors synth/query_vectors.jsonl"
      " --index index/impact.idx --qrels synth/qrels.txt --samples wack/importance.jsonl"
      " --thresholds 1,10,100 --repeats 3 --out ablate",
      "eval --run search_impact/run.trec --qrels synth/qrels.txt --out eval",
  };
  for (const auto& step : steps) {
    if (run_cli(cli, dir, step + t) != 0) return step;
  }
  return {};
}

}  // namespace wackymeter::testing
