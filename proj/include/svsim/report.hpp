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
// Run execution and run-directory artifacts: results.csv, verdicts.txt, the
// normalized config echo, optional hex/pcap traces — plus the `check` logic
// that compares a hybrid run against its legacy reference run.

#ifndef SVSIM_REPORT_HPP
#define SVSIM_REPORT_HPP

#include <string>
#include <vector>

#include "svsim/access_network.hpp"
#include "svsim/config.hpp"

namespace svsim {

// A shared-plan member sees no disadvantage when its goodput stays within
// this fraction of the legacy reference.
inline constexpr double kNoDisadvantageEpsilon = 0.02;

inline constexpr const char* kVerdictsFile = "verdicts.txt";
inline constexpr const char* kConfigEcho = "config.normalized.conf";

struct RunResult {
  std::vector<SummaryRow> rows;
  std::vector<ShaperVerdict> verdicts;
};

// Builds, runs and writes all artifacts into out_dir. Throws ConfigError on
// invalid configuration and std::runtime_error on I/O faults.
RunResult run_scenario(const ScenarioConfig& config,
                       const std::string& out_dir);

std::string format_csv(const std::vector<SummaryRow>& rows);
std::string format_verdicts(const std::vector<ShaperVerdict>& verdicts);

// One no-disadvantage comparison line.
struct CheckLine {
  std::uint16_t subscriber;
  double run_goodput_bps;
  double ref_goodput_bps;
  bool pass;
};

struct CheckReport {
  std::vector<CheckLine> lines;
  bool conformance_ok = true;
  bool pass = true;
  std::string text() const;
};

// Evaluates summary rows in memory (the no-disadvantage rule itself).
CheckReport no_disadvantage_check(const ScenarioConfig& run_config,
                                  const std::vector<SummaryRow>& run_rows,
                                  const std::vector<SummaryRow>& ref_rows,
                                  bool run_conformant, bool ref_conformant);

// Reads two run directories and evaluates. Throws ConfigError when the
// directories are missing artifacts or the reference does not match.
CheckReport check_run(const std::string& run_dir, const std::string& ref_dir);

// results.csv reader (used by check and by tests).
std::vector<SummaryRow> read_csv(const std::string& path);

}  // namespace svsim

#endif  // SVSIM_REPORT_HPP
