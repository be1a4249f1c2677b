// Copyright 2026 The qsig Authors
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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "qsig/mode.hpp"

namespace qsig::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitScenarioFailed = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the directory for reports written without
/// --out.
inline constexpr const char* kOutDirEnv = "QSIG_OUT_DIR";

struct CliConfig {
  std::string command;  // "run" or "list-scenarios"
  std::string scenario;
  int d = 5;
  int k = 2;
  int n = 2;
  int t = 4;
  int b = 16;
  int trials = 1000;
  std::uint64_t seed = 0;
  Mode mode = Mode::kReferee;
  std::string channel = "sigma";
  std::string swap = "sig_only";
  std::string out;  // empty: <scenario>_seed<seed>.json under kOutDirEnv or the working directory
  int threads = 1;
  int verbosity = 0;
};

struct ParseResult {
  std::optional<CliConfig> config;  // empty when the caller should exit
  int exit_code = kExitOk;
};

/// Help, usage errors and invalid parameter combinations are written to
/// `out`/`err` and reported through exit_code.
ParseResult parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int execute(const CliConfig& config, std::ostream& out, std::ostream& err);

int main_entry(int argc, const char* const* argv);

}  // namespace qsig::cli
