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

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wackymeter/random.hpp"
#include "wackymeter/synthetic.hpp"
#include "wackymeter/types.hpp"

namespace wackymeter::testing {

SparseVector vec(const std::string& id,
                 std::initializer_list<std::pair<TokenId, double>> weights);
TokenizedInput input(const std::string& id, std::vector<TokenId> tokens);

// Random vector over [0, vocab) with each token set with probability density;
// weights that are multiples of 1/4, so exact score ties occur.
SparseVector random_vector(Rng& rng, const std::string& id, std::size_t vocab,
                           double density);

SyntheticModel small_model(std::uint64_t seed, const ExpansionProfile& profile,
                           std::size_t vocab = 400, std::size_t docs = 150,
                           std::size_t queries = 30);

// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string slurp(const std::filesystem::path& path);
void spit(const std::filesystem::path& path, const std::string& bytes);

// Every regular file under dir (relative path -> bytes).
std::map<std::string, std::string> snapshot_dir(const std::filesystem::path& dir);

// Runs a shell command with stdout/stderr discarded; returns its exit status.
int run_quiet(const std::string& command);

// Runs the CLI inside dir with the given arguments.
int run_cli(const std::string& cli, const std::filesystem::path& dir, const std::string& args);

// Handwritten per-token file of raw logits with one input, q1.
extern const char* const kPerTokenFixture;

// Every command on a small synthetic model. Inputs are addressed relative to
// dir so manifests do not depend on where the pipeline runs. Returns the
// first failing step, or an empty string.
std::string run_pipeline(const std::string& cli, const std::filesystem::path& dir,
                         unsigned threads);

}  // namespace wackymeter::testing
