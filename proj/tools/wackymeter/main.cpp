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
// wackymeter command-line entry point.
//
// Exit status: 0 success, 1 unexpected failure, 2 usage error, 3 file
// system error, 4 malformed input file, 5 input that violates a data
// invariant.

#include <cstdio>
#include <filesystem>
#include <memory>

#include <fmt/format.h>

#include "commands.hpp"
#include "json_config.hpp"
#include "wackymeter/errors.hpp"
#include "wackymeter/io.hpp"
#include "wackymeter/manifest.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kIo = 3,
  kParse = 4,
  kValidation = 5,
};

int fail(int code, const char* kind, const char* what) {
  fmt::print(stderr, "wackymeter: {}: {}\n", kind, what);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = wackymeter::cli;
  CLI::App app{"Quantify wacky weights in learned sparse retrieval", "wackymeter"};
  app.set_version_flag("--version", std::string(wackymeter::kToolVersion));
  app.config_formatter(std::make_shared<cli::JsonConfig>());
  app.set_config("--config", "", "Versioned JSON config; flags override it");
  app.require_subcommand(1);
  auto commands = cli::register_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  for (auto& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      cmd.validate();
      cli::RunContext ctx;
      ctx.out = *cmd.common_out;
      std::error_code ec;
      std::filesystem::create_directories(ctx.out, ec);
      if (ec) {
        throw wackymeter::IoError(
            fmt::format("cannot create output directory '{}': {}", ctx.out.string(), ec.message()));
      }
      ctx.manifest.command = cmd.app->get_name();
      ctx.manifest.seed = *cmd.common_seed;
      ctx.manifest.config = cli::config_snapshot(*cmd.app);
      cmd.run(ctx);
      wackymeter::write_file(ctx.out / std::string(wackymeter::kManifestFile),
                             ctx.manifest.to_json());
      return kOk;
    } catch (const cli::UsageError& e) {
      return fail(kUsage, "usage", e.what());
    } catch (const std::invalid_argument& e) {
      return fail(kUsage, "usage", e.what());
    } catch (const wackymeter::IoError& e) {
      return fail(kIo, "i/o error", e.what());
    } catch (const wackymeter::ParseError& e) {
      return fail(kParse, "parse error", e.what());
    } catch (const wackymeter::ValidationError& e) {
      return fail(kValidation, "invalid input", e.what());
    } catch (const std::exception& e) {
      return fail(kFailure, "error", e.what());
    }
  }
  return kUsage;
}
