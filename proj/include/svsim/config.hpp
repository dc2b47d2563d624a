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
// Scenario configuration: a flat, line-oriented `section.key = value` text
// format. Sections: topology, subscribers.<vid>, group, sources.<n>, run,
// outputs. Rates take bps/kbps/Mbps/Gbps suffixes, sizes b/kb/Mb/Gb (bits),
// times ns/us/ms/s. Parsing and validation errors name the offending key.

#ifndef SVSIM_CONFIG_HPP
#define SVSIM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "svsim/network.hpp"
#include "svsim/sim_time.hpp"
#include "svsim/traffic_gen.hpp"

namespace svsim {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what),
        key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class PlanKind : std::uint8_t { kLegacyFlatRate, kSharedExcess };
enum class InnerScheduler : std::uint8_t { kDrr, kCsfq };

struct SubscriberConfig {
  std::uint16_t vid = 0;
  PlanKind plan = PlanKind::kLegacyFlatRate;
  std::int64_t token_rate_bps = 0;
  std::int64_t bucket_bits = 0;
};

struct GroupConfig {
  std::uint16_t svid = 0;
  InnerScheduler scheduler = InnerScheduler::kDrr;
  // nullopt means "sum of member values" (the default policy).
  std::optional<std::int64_t> tbf_rate_bps;
  std::optional<std::int64_t> tbf_bucket_bits;
  Tick csfq_window_ns = 100 * kNsPerMs;
};

struct TopologyConfig {
  LinkParams host_link{1'000'000'000, 5 * kNsPerUs};
  LinkParams inner_link{1'000'000'000, 5 * kNsPerUs};
  LinkParams shared_link{1'000'000'000, 5 * kNsPerUs};
  LinkParams drop_link{1'000'000'000, 5 * kNsPerUs};
  Tick fdb_aging_ns = 300 * kNsPerSec;
};

struct RunConfig {
  Tick duration_ns = 0;
  std::uint64_t seed = 1;
  double warmup_fraction = 0.1;
  bool hello = true;  // hosts announce themselves so relays learn early
};

struct OutputConfig {
  std::string csv = "results.csv";
  bool trace_hex = false;
  bool trace_pcap = false;
  bool strict_ethernet = false;  // pad traced frames to the 64-byte minimum
  Tick counters_interval_ns = 0;  // 0 = no counter sampling
};

struct ScenarioConfig {
  TopologyConfig topology;
  std::map<std::uint16_t, SubscriberConfig> subscribers;
  std::optional<GroupConfig> group;
  std::vector<SourceSpec> sources;
  RunConfig run;
  OutputConfig outputs;

  static ScenarioConfig parse(const std::string& text);
  static ScenarioConfig parse_file(const std::string& path);

  // Normalized text form; parse(dump()) reproduces this config exactly.
  std::string dump() const;

  void validate() const;

  std::vector<std::uint16_t> shared_members() const;
  std::int64_t group_tbf_rate_bps() const;
  std::int64_t group_tbf_bucket_bits() const;
};

// Unit parsing helpers (exposed for tests).
std::int64_t parse_rate_bps(const std::string& text, const std::string& key);
std::int64_t parse_size_bits(const std::string& text, const std::string& key);
Tick parse_time_ns(const std::string& text, const std::string& key);
std::string format_rate(std::int64_t bps);
std::string format_bits(std::int64_t bits);
std::string format_time(Tick ns);

}  // namespace svsim

#endif  // SVSIM_CONFIG_HPP
