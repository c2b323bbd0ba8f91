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

#include <filesystem>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wackymeter/manifest.hpp"

namespace wackymeter::cli {

// A flag combination that CLI11 cannot express; reported like a CLI11
// usage error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunContext {
  std::filesystem::path out;
  RunManifest manifest;
};

struct Command {
  CLI::App* app = nullptr;
  // Semantic flag checks; runs before any file is touched.
  std::function<void()> validate;
  // Reads inputs, writes outputs into ctx.out and records every input in
  // ctx.manifest.
  std::function<void(RunContext&)> run;
  const std::uint64_t* common_seed = nullptr;
  const std::string* common_out = nullptr;
};

std::vector<Command> register_commands(CLI::App& root);

// Every option of the subcommand that can change an output, as text. The
// worker count, output directory and config file are left out.
std::map<std::string, std::string> config_snapshot(const CLI::App& sub);

}  // namespace wackymeter::cli
