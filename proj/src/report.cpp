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

#include "svsim/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "svsim/trace.hpp"

namespace svsim {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace

std::string format_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "subscriber,plan,offered_bytes,delivered_bytes,dropped_bytes,"
         "goodput_bps,mean_delay_ns,p95_delay_ns,p99_delay_ns,drop_ratio\n";
  for (const SummaryRow& r : rows) {
    out << r.subscriber << ',' << r.plan << ',' << r.offered_bytes << ','
        << r.delivered_bytes << ',' << r.dropped_bytes << ','
        << fixed(r.goodput_bps, 3) << ',' << r.mean_delay_ns << ','
        << r.p95_delay_ns << ',' << r.p99_delay_ns << ','
        << fixed(r.drop_ratio, 6) << '\n';
  }
  return out.str();
}

std::string format_verdicts(const std::vector<ShaperVerdict>& verdicts) {
  std::ostringstream out;
  for (const ShaperVerdict& v : verdicts) {
    out << "tbf vid=" << v.vid << " kind=" << (v.is_group ? "group" : "legacy")
        << " rate=" << v.rate_bps << " bucket=" << v.bucket_bits
        << " frames=" << v.departed_frames
        << " conformant=" << (v.conformant ? "yes" : "no") << '\n';
  }
  return out.str();
}

RunResult run_scenario(const ScenarioConfig& config,
                       const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  AccessNetwork sim(config);

  std::unique_ptr<HexTraceWriter> hex;
  std::unique_ptr<PcapWriter> pcap;
  const bool pad = config.outputs.strict_ethernet;
  if (config.outputs.trace_hex)
    hex = std::make_unique<HexTraceWriter>(
        (fs::path(out_dir) / "trace.hex").string());
  if (config.outputs.trace_pcap)
    pcap = std::make_unique<PcapWriter>(
        (fs::path(out_dir) / "trace.pcap").string());
  if (hex || pcap) {
    sim.network().on_tx = [&](Tick t, const Node& node, int port,
                              const SimFrame& f) {
      auto bytes = f.frame.serialize(pad);
      if (hex) hex->record(t, node.name(), port, true, bytes);
      if (pcap) pcap->record(t, bytes);
    };
    sim.network().on_rx = [&](Tick t, const Node& node, int port,
                              const SimFrame& f) {
      if (hex) hex->record(t, node.name(), port, false, f.frame.serialize(pad));
    };
  }

  sim.run();

  RunResult result{sim.summarize(), sim.conformance_verdicts()};

  write_file((fs::path(out_dir) / config.outputs.csv).string(),
             format_csv(result.rows));
  write_file((fs::path(out_dir) / kVerdictsFile).string(),
             format_verdicts(result.verdicts));
  write_file((fs::path(out_dir) / kConfigEcho).string(), config.dump());

  // Forwarding databases as learned by the end of the run.
  {
    std::ostringstream out;
    out << "node,vid,mac,port,age_ns\n";
    for (const auto& node : sim.network().nodes()) {
      auto* sw = dynamic_cast<SwitchNode*>(node.get());
      if (!sw) continue;
      for (const FdbRow& r : sw->fdb().dump(sim.loop().now()))
        out << sw->name() << ',' << r.vid << ',' << r.mac.to_string() << ','
            << r.port << ',' << r.age_ns << '\n';
    }
    write_file((fs::path(out_dir) / "fdb.txt").string(), out.str());
  }

  if (config.outputs.counters_interval_ns > 0) {
    std::ostringstream out;
    out << "time_ns,element,offered_frames,offered_bytes,accepted_frames,"
           "accepted_bytes,departed_frames,departed_bytes,dropped_frames,"
           "dropped_bytes\n";
    for (const CounterSample& s : sim.counter_samples()) {
      const ElementCounters& c = s.counters;
      out << s.time << ',' << s.element << ',' << c.offered_frames << ','
          << c.offered_bytes << ',' << c.accepted_frames << ','
          << c.accepted_bytes << ',' << c.departed_frames << ','
          << c.departed_bytes << ',' << c.dropped_frames << ','
          << c.dropped_bytes << '\n';
    }
    write_file((fs::path(out_dir) / "counters.csv").string(), out.str());
  }
  return result;
}

std::vector<SummaryRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open results file: " + path);
  std::vector<SummaryRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 10)
      throw ConfigError("", "malformed results row: " + line);
    SummaryRow r{};
    r.subscriber = static_cast<std::uint16_t>(std::stoul(fields[0]));
    r.plan = fields[1];
    r.offered_bytes = std::stoull(fields[2]);
    r.delivered_bytes = std::stoull(fields[3]);
    r.dropped_bytes = std::stoull(fields[4]);
    r.goodput_bps = std::stod(fields[5]);
    r.mean_delay_ns = std::stoll(fields[6]);
    r.p95_delay_ns = std::stoll(fields[7]);
    r.p99_delay_ns = std::stoll(fields[8]);
    r.drop_ratio = std::stod(fields[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

CheckReport no_disadvantage_check(const ScenarioConfig& run_config,
                                  const std::vector<SummaryRow>& run_rows,
                                  const std::vector<SummaryRow>& ref_rows,
                                  bool run_conformant, bool ref_conformant) {
  CheckReport report;
  report.conformance_ok = run_conformant && ref_conformant;
  auto find = [](const std::vector<SummaryRow>& rows, std::uint16_t vid)
      -> const SummaryRow* {
    for (const SummaryRow& r : rows)
      if (r.subscriber == vid) return &r;
    return nullptr;
  };
  for (std::uint16_t vid : run_config.shared_members()) {
    const SummaryRow* run = find(run_rows, vid);
    const SummaryRow* ref = find(ref_rows, vid);
    if (!run || !ref)
      throw ConfigError("subscribers." + std::to_string(vid),
                        "subscriber missing from results");
    CheckLine line{vid, run->goodput_bps, ref->goodput_bps, true};
    line.pass =
        run->goodput_bps >= (1.0 - kNoDisadvantageEpsilon) * ref->goodput_bps;
    report.lines.push_back(line);
  }
  report.pass = report.conformance_ok;
  for (const CheckLine& l : report.lines) report.pass = report.pass && l.pass;
  return report;
}

std::string CheckReport::text() const {
  std::ostringstream out;
  for (const CheckLine& l : lines) {
    out << "no-disadvantage subscriber=" << l.subscriber
        << " goodput=" << fixed(l.run_goodput_bps, 0)
        << " reference=" << fixed(l.ref_goodput_bps, 0)
        << " verdict=" << (l.pass ? "pass" : "FAIL") << '\n';
  }
  out << "conformance " << (conformance_ok ? "pass" : "FAIL") << '\n';
  out << "overall " << (pass ? "pass" : "FAIL") << '\n';
  return out.str();
}

namespace {

bool verdicts_all_pass(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "missing verdicts file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("conformant=no") != std::string::npos) return false;
  }
  return true;
}

}  // namespace

CheckReport check_run(const std::string& run_dir, const std::string& ref_dir) {
  namespace fs = std::filesystem;
  auto cfg_path = [](const std::string& dir) {
    return (fs::path(dir) / kConfigEcho).string();
  };
  if (!fs::exists(ref_dir) || !fs::exists(cfg_path(ref_dir)))
    throw ConfigError("", "reference run not found in " + ref_dir);
  if (!fs::exists(run_dir) || !fs::exists(cfg_path(run_dir)))
    throw ConfigError("", "run directory not found in " + run_dir);

  ScenarioConfig run_cfg = ScenarioConfig::parse_file(cfg_path(run_dir));
  ScenarioConfig ref_cfg = ScenarioConfig::parse_file(cfg_path(ref_dir));

  // The reference must shape each shared member with a standalone legacy TBF
  // at the same token rate and bucket size.
  for (std::uint16_t vid : run_cfg.shared_members()) {
    auto it = ref_cfg.subscribers.find(vid);
    std::string key = "subscribers." + std::to_string(vid);
    if (it == ref_cfg.subscribers.end())
      throw ConfigError(key, "missing from the reference run");
    if (it->second.plan != PlanKind::kLegacyFlatRate)
      throw ConfigError(key + ".plan", "reference subscriber must be legacy");
    const SubscriberConfig& mine = run_cfg.subscribers.at(vid);
    if (it->second.token_rate_bps != mine.token_rate_bps ||
        it->second.bucket_bits != mine.bucket_bits)
      throw ConfigError(key + ".token_rate",
                        "reference token bucket differs from the run");
  }

  auto run_rows =
      read_csv((fs::path(run_dir) / run_cfg.outputs.csv).string());
  auto ref_rows =
      read_csv((fs::path(ref_dir) / ref_cfg.outputs.csv).string());
  bool run_ok =
      verdicts_all_pass((fs::path(run_dir) / kVerdictsFile).string());
  bool ref_ok =
      verdicts_all_pass((fs::path(ref_dir) / kVerdictsFile).string());
  return no_disadvantage_check(run_cfg, run_rows, ref_rows, run_ok, ref_ok);
}

}  // namespace svsim
