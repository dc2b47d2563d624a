// Copyright 2026 The svsim Authors
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
//
// svsim — deterministic simulator of hybrid ISP traffic control in shared
// access networks over stacked VLANs.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "svsim/config.hpp"
#include "svsim/report.hpp"

namespace {

svsim::Tick parse_duration_arg(const std::string& text) {
  // Accepts "30" (seconds) or any unit-suffixed time like "500ms".
  try {
    return svsim::parse_time_ns(text, "--duration");
  } catch (const svsim::ConfigError&) {
  }
  return svsim::parse_time_ns(text + "s", "--duration");
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::uint64_t seed, bool seed_set, const std::string& trace,
            const std::string& duration) {
  svsim::ScenarioConfig cfg = svsim::ScenarioConfig::parse_file(config_path);
  if (seed_set) cfg.run.seed = seed;
  if (!duration.empty()) cfg.run.duration_ns = parse_duration_arg(duration);
  if (!trace.empty()) {
    cfg.outputs.trace_hex = trace.find("hex") != std::string::npos;
    cfg.outputs.trace_pcap = trace.find("pcap") != std::string::npos;
    if (!cfg.outputs.trace_hex && !cfg.outputs.trace_pcap && trace != "none")
      throw svsim::ConfigError("--trace", "options are none, hex, pcap");
  }
  cfg.validate();

  svsim::RunResult result = svsim::run_scenario(cfg, out_dir);
  std::cout << svsim::format_csv(result.rows);
  std::cout << svsim::format_verdicts(result.verdicts);
  std::cout << "run complete: " << out_dir << "\n";
  return 0;
}

int cmd_check(const std::string& run_dir, const std::string& ref_dir) {
  svsim::CheckReport report = svsim::check_run(run_dir, ref_dir);
  std::cout << report.text();
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "svsim: shared-access network simulator with legacy token-bucket "
      "shaping and grouped excess-bandwidth scheduling over stacked VLANs"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "results", trace, duration;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "run a scenario");
  run->add_option("--config", config_path, "scenario configuration file")
      ->required();
  run->add_option("--out", out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "override run.seed");
  run->add_option("--trace", trace, "trace outputs: none, hex, pcap");
  run->add_option("--duration", duration,
                  "override run.duration (seconds or unit-suffixed)");

  std::string check_run_dir, check_ref_dir;
  auto* check = app.add_subcommand(
      "check", "evaluate conformance and no-disadvantage verdicts");
  check->add_option("--run", check_run_dir, "run directory")->required();
  check->add_option("--reference", check_ref_dir,
                    "reference legacy run directory")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, out_dir, seed, seed_opt->count() > 0, trace,
                     duration);
    if (check->parsed()) return cmd_check(check_run_dir, check_ref_dir);
  } catch (const svsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
