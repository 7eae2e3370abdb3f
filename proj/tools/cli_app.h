// Copyright 2026 The coopgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COOPGAME_TOOLS_CLI_APP_H_
#define COOPGAME_TOOLS_CLI_APP_H_

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace coopgame::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;   // repro: a qualitative check failed
inline constexpr int kExitUsage = 2;
inline constexpr int kExitScenario = 3;      // parse, validation, unsupported
inline constexpr int kExitNotConverged = 4;
inline constexpr int kExitIo = 5;
inline constexpr int kExitInternal = 6;

// Name of the environment variable holding the default scenario directory.
inline constexpr const char* kScenarioDirEnv = "COOPGAME_SCENARIO_DIR";

struct Options {
  std::string scenario;
  std::vector<std::string> overrides;
  std::string output;
  std::string format = "csv";
  std::string trajectory;
  std::string output_dir;
  bool quiet = false;
};

// The parser, with one subcommand per action. Each subcommand carries the
// flags it accepts.
std::unique_ptr<CLI::App> BuildApp(Options& options);

// Parses and runs; returns the exit code.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace coopgame::cli

#endif  // COOPGAME_TOOLS_CLI_APP_H_
