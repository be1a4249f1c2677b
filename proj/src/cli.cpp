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

#include "qsig/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "qsig/attacks.hpp"

namespace qsig::cli {

namespace {

attacks::Scenario to_scenario(const CliConfig& c) {
  attacks::Scenario s;
  s.name = c.scenario;
  s.params.d = c.d;
  s.params.k = c.k;
  s.params.n = c.n;
  s.params.t = c.t;
  s.params.b = c.b;
  s.params.mode = c.mode;
  s.params.channel = c.channel;
  s.params.swap = c.swap;
  s.trials = c.trials;
  s.seed = c.seed;
  s.threads = c.threads;
  return s;
}

std::filesystem::path report_path(const CliConfig& c) {
  if (!c.out.empty()) return c.out;
  const std::string file = fmt::format("{}_seed{}.json", c.scenario, c.seed);
  const char* dir = std::getenv(kOutDirEnv);
  return dir != nullptr && *dir != '\0' ? std::filesystem::path(dir) / file : std::filesystem::path(file);
}

std::string expectation_line(const attacks::Expectation& e) {
  if (e.regime == attacks::Expectation::Regime::kAcceptAll) return fmt::format("{} = 1", e.metric);
  if (!e.statistical) return fmt::format("{} <= {:.6g}", e.metric, e.bound);
  return fmt::format("{} <= {:.6g} + 3 x {:.6g} = {:.6g}", e.metric, e.nominal, e.sigma, e.bound);
}

void print_summary(const attacks::Report& r, const std::filesystem::path& path, int verbosity, std::ostream& out) {
  const auto& s = r.scenario;
  std::string text;
  text += fmt::format("{:<13} {}\n", "scenario", s.name);
  text += fmt::format("{:<13} {}\n", "params", r.to_json()["scenario"]["params"].dump());
  text += fmt::format("{:<13} {} (seed {})\n", "trials", s.trials, s.seed);
  text += fmt::format("{:<13} {:.6f} ({}/{})\n", "accept_rate", r.accept_rate, r.accept_count, s.trials);
  if (r.expected.metric != "accept_rate") text += fmt::format("{:<13} {:.6f}\n", r.expected.metric, r.observed);
  text += fmt::format("{:<13} {}\n", "expected", expectation_line(r.expected));
  text += fmt::format("{:<13} {}\n", "result", r.pass ? "PASS" : "FAIL");
  if (s.name == "truesig_forgery" && r.accept_count == s.trials) {
    text += "FORGERY ACCEPTED (receiver-side forgery reproduced)\n";
  }
  if (verbosity > 0) {
    for (const auto& [stage, count] : r.failure_stages) text += fmt::format("  {:<24} {}\n", stage, count);
    for (const auto& [key, value] : r.extras.items()) text += fmt::format("  {:<24} {}\n", key, value.dump());
  }
  text += fmt::format("{:<13} {:.3f} s\n", "wall_time", r.wall_time_seconds);
  text += fmt::format("{:<13} {}\n", "report", path.string());
  out << text;
}

}  // namespace

ParseResult parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig c;
  CLI::App app{"Quantum signature protocol laboratory", "qsig"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", c.verbosity, "Print failure stages and extras");

  CLI::App* run = app.add_subcommand("run", "Run a scenario and write its report");
  run->add_option("--scenario", c.scenario, "Scenario name (see list-scenarios)")->required();
  run->add_option("--d", c.d, "Qudit dimension for the true-signature analog")->capture_default_str();
  run->add_option("--k", c.k, "Code parameter k")->capture_default_str();
  run->add_option("--n", c.n, "Message qubits")->capture_default_str();
  run->add_option("--t", c.t, "Trap qubits")->capture_default_str();
  run->add_option("--b", c.b, "MAC field bits")->check(CLI::IsMember({16, 32, 64}))->capture_default_str();
  run->add_option("--trials", c.trials, "Trial count")->capture_default_str();
  run->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  std::string mode = "referee";
  run->add_option("--mode", mode, "referee or protocol")
      ->check(CLI::IsMember({"referee", "protocol"}))
      ->capture_default_str();
  run->add_option("--channel", c.channel, "Tampered hop for eve_pauli_tamper: sigma, y or t_reply")
      ->check(CLI::IsMember({"sigma", "y", "t_reply"}))
      ->capture_default_str();
  run->add_option("--swap", c.swap, "Key substitution for wrong_key_binding: sig_only or full")
      ->check(CLI::IsMember({"sig_only", "full"}))
      ->capture_default_str();
  run->add_option("--out", c.out, fmt::format("Report path (default: <scenario>_seed<seed>.json in ${})", kOutDirEnv));
  run->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_flag("-v,--verbose", c.verbosity, "Print failure stages and extras");

  app.add_subcommand("list-scenarios", "List scenario names");

  if (argc <= 1) {
    out << app.help();
    return {std::nullopt, kExitUsage};
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, code == 0 ? kExitOk : kExitUsage};
  }

  if (*run) {
    c.command = "run";
    c.mode = parse_mode(mode);
    try {
      attacks::validate(to_scenario(c));
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return {std::nullopt, kExitUsage};
    }
  } else {
    c.command = "list-scenarios";
  }
  return {c, kExitOk};
}

int execute(const CliConfig& c, std::ostream& out, std::ostream& err) {
  if (c.command == "list-scenarios") {
    for (const auto& info : attacks::scenario_catalog()) out << fmt::format("{:<29} {}\n", info.name, info.description);
    return kExitOk;
  }
  const std::filesystem::path path = report_path(c);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot write report to " << path.string() << "\n";
    return kExitUsage;
  }
  attacks::Report report;
  try {
    report = attacks::run_scenario(to_scenario(c));
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  file << report.to_json().dump(2) << "\n";
  file.close();
  if (!file) {
    err << "error: failed writing " << path.string() << "\n";
    return kExitUsage;
  }
  print_summary(report, path, c.verbosity, out);
  return report.pass ? kExitOk : kExitScenarioFailed;
}

int main_entry(int argc, const char* const* argv) {
  const ParseResult parsed = parse(argc, argv, std::cout, std::cerr);
  if (!parsed.config) return parsed.exit_code;
  return execute(*parsed.config, std::cout, std::cerr);
}

}  // namespace qsig::cli
