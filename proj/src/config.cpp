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

#include "svsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "svsim/traffic_control.hpp"

namespace svsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& num, const std::string& key) {
  try {
    std::size_t pos = 0;
    double v = std::stod(num, &pos);
    if (pos != num.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "not a number: '" + num + "'");
  }
}

std::int64_t scaled_value(const std::string& text, const std::string& key,
                          const std::vector<std::pair<std::string, double>>&
                              suffixes,
                          const std::string& what) {
  std::string t = trim(text);
  if (t.empty()) throw ConfigError(key, "empty " + what);
  for (const auto& [suffix, scale] : suffixes) {
    if (t.size() > suffix.size() &&
        t.compare(t.size() - suffix.size(), suffix.size(), suffix) == 0) {
      double v = parse_number(trim(t.substr(0, t.size() - suffix.size())), key);
      return static_cast<std::int64_t>(std::llround(v * scale));
    }
  }
  double v = parse_number(t, key);
  return static_cast<std::int64_t>(std::llround(v));
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
  try {
    std::size_t pos = 0;
    std::uint64_t v = std::stoull(trim(text), &pos);
    if (pos != trim(text).size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "not an unsigned integer: '" + text + "'");
  }
}

bool parse_bool(const std::string& text, const std::string& key) {
  std::string t = trim(text);
  if (t == "on" || t == "true" || t == "1") return true;
  if (t == "off" || t == "false" || t == "0") return false;
  throw ConfigError(key, "expected on/off: '" + text + "'");
}

std::uint16_t parse_vid(const std::string& text, const std::string& key) {
  std::uint64_t v = parse_u64(text, key);
  if (v < 1 || v > kMaxVid)
    throw ConfigError(key, "VID must lie in [1, 4094]");
  return static_cast<std::uint16_t>(v);
}

}  // namespace

std::int64_t parse_rate_bps(const std::string& text, const std::string& key) {
  return scaled_value(text, key,
                      {{"Gbps", 1e9}, {"Mbps", 1e6}, {"kbps", 1e3},
                       {"bps", 1.0}},
                      "rate");
}

std::int64_t parse_size_bits(const std::string& text, const std::string& key) {
  return scaled_value(text, key,
                      {{"Gb", 1e9}, {"Mb", 1e6}, {"kb", 1e3}, {"b", 1.0}},
                      "size");
}

Tick parse_time_ns(const std::string& text, const std::string& key) {
  return scaled_value(text, key,
                      {{"ns", 1.0}, {"us", 1e3}, {"ms", 1e6}, {"s", 1e9}},
                      "time");
}

namespace {

std::string format_scaled(std::int64_t v,
                          const std::vector<std::pair<std::int64_t,
                                                      std::string>>& units) {
  for (const auto& [scale, suffix] : units) {
    if (v != 0 && v % scale == 0) return std::to_string(v / scale) + suffix;
  }
  return std::to_string(v) + units.back().second;
}

}  // namespace

std::string format_rate(std::int64_t bps) {
  return format_scaled(
      bps, {{1'000'000'000, "Gbps"}, {1'000'000, "Mbps"}, {1'000, "kbps"},
            {1, "bps"}});
}

std::string format_bits(std::int64_t bits) {
  return format_scaled(
      bits, {{1'000'000'000, "Gb"}, {1'000'000, "Mb"}, {1'000, "kb"},
             {1, "b"}});
}

std::string format_time(Tick ns) {
  return format_scaled(
      ns, {{kNsPerSec, "s"}, {kNsPerMs, "ms"}, {kNsPerUs, "us"}, {1, "ns"}});
}

ScenarioConfig ScenarioConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

ScenarioConfig ScenarioConfig::parse(const std::string& text) {
  ScenarioConfig cfg;
  std::map<std::string, std::string> seen;
  std::map<std::size_t, SourceSpec> sources;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  while (std::getline(in, line)) {
    lineno++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "line " + std::to_string(lineno) +
                                ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) +
                                               ": missing key");
    if (!seen.emplace(key, value).second)
      throw ConfigError(key, "duplicate key");

    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      auto dot = key.find('.', pos);
      if (dot == std::string::npos) {
        parts.push_back(key.substr(pos));
        break;
      }
      parts.push_back(key.substr(pos, dot - pos));
      pos = dot + 1;
    }

    const std::string& section = parts[0];
    if (section == "topology" && parts.size() == 2) {
      const std::string& k = parts[1];
      if (k == "host_link_rate")
        cfg.topology.host_link.rate_bps = parse_rate_bps(value, key);
      else if (k == "host_link_delay")
        cfg.topology.host_link.delay_ns = parse_time_ns(value, key);
      else if (k == "inner_link_rate")
        cfg.topology.inner_link.rate_bps = parse_rate_bps(value, key);
      else if (k == "inner_link_delay")
        cfg.topology.inner_link.delay_ns = parse_time_ns(value, key);
      else if (k == "shared_link_rate")
        cfg.topology.shared_link.rate_bps = parse_rate_bps(value, key);
      else if (k == "shared_link_delay")
        cfg.topology.shared_link.delay_ns = parse_time_ns(value, key);
      else if (k == "drop_link_rate")
        cfg.topology.drop_link.rate_bps = parse_rate_bps(value, key);
      else if (k == "drop_link_delay")
        cfg.topology.drop_link.delay_ns = parse_time_ns(value, key);
      else if (k == "fdb_aging")
        cfg.topology.fdb_aging_ns = parse_time_ns(value, key);
      else
        throw ConfigError(key, "unknown topology key");
    } else if (section == "subscribers" && parts.size() == 3) {
      std::uint16_t vid = parse_vid(parts[1], key);
      SubscriberConfig& sub = cfg.subscribers[vid];
      sub.vid = vid;
      const std::string& k = parts[2];
      if (k == "plan") {
        if (value == "legacy")
          sub.plan = PlanKind::kLegacyFlatRate;
        else if (value == "shared")
          sub.plan = PlanKind::kSharedExcess;
        else
          throw ConfigError(key, "plan must be 'legacy' or 'shared'");
      } else if (k == "token_rate") {
        sub.token_rate_bps = parse_rate_bps(value, key);
      } else if (k == "bucket_size") {
        sub.bucket_bits = parse_size_bits(value, key);
      } else {
        throw ConfigError(key, "unknown subscriber key");
      }
    } else if (section == "group" && parts.size() == 2) {
      if (!cfg.group) cfg.group.emplace();
      const std::string& k = parts[1];
      if (k == "svid")
        cfg.group->svid = parse_vid(value, key);
      else if (k == "scheduler") {
        if (value == "drr")
          cfg.group->scheduler = InnerScheduler::kDrr;
        else if (value == "csfq")
          cfg.group->scheduler = InnerScheduler::kCsfq;
        else
          throw ConfigError(key, "scheduler must be 'drr' or 'csfq'");
      } else if (k == "tbf_rate") {
        if (value != "sum") cfg.group->tbf_rate_bps = parse_rate_bps(value, key);
      } else if (k == "tbf_bucket") {
        if (value != "sum")
          cfg.group->tbf_bucket_bits = parse_size_bits(value, key);
      } else if (k == "csfq_window") {
        cfg.group->csfq_window_ns = parse_time_ns(value, key);
      } else {
        throw ConfigError(key, "unknown group key");
      }
    } else if (section == "sources" && parts.size() == 3) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(parts[1]);
      } catch (const std::exception&) {
        throw ConfigError(key, "source index must be an integer");
      }
      SourceSpec& src = sources[idx];
      const std::string& k = parts[2];
      if (k == "kind") {
        if (value == "cbr")
          src.kind = SourceKind::kCbr;
        else if (value == "poisson")
          src.kind = SourceKind::kPoisson;
        else if (value == "onoff")
          src.kind = SourceKind::kOnOff;
        else
          throw ConfigError(key, "kind must be cbr, poisson or onoff");
      } else if (k == "subscriber") {
        src.subscriber = parse_vid(value, key);
      } else if (k == "rate") {
        src.mean_rate_bps = parse_rate_bps(value, key);
      } else if (k == "frame_size") {
        auto colon = value.find(':');
        if (colon == std::string::npos) {
          src.frame_min = src.frame_max =
              static_cast<std::int32_t>(parse_u64(value, key));
        } else {
          src.frame_min = static_cast<std::int32_t>(
              parse_u64(value.substr(0, colon), key));
          src.frame_max = static_cast<std::int32_t>(
              parse_u64(value.substr(colon + 1), key));
        }
      } else if (k == "start") {
        src.start_ns = parse_time_ns(value, key);
      } else if (k == "stop") {
        src.stop_ns = parse_time_ns(value, key);
      } else if (k == "mean_on") {
        src.mean_on_ns = parse_time_ns(value, key);
      } else if (k == "mean_off") {
        src.mean_off_ns = parse_time_ns(value, key);
      } else {
        throw ConfigError(key, "unknown source key");
      }
    } else if (section == "run" && parts.size() == 2) {
      const std::string& k = parts[1];
      if (k == "duration")
        cfg.run.duration_ns = parse_time_ns(value, key);
      else if (k == "seed")
        cfg.run.seed = parse_u64(value, key);
      else if (k == "warmup")
        cfg.run.warmup_fraction = parse_number(value, key);
      else if (k == "hello")
        cfg.run.hello = parse_bool(value, key);
      else
        throw ConfigError(key, "unknown run key");
    } else if (section == "outputs" && parts.size() == 2) {
      const std::string& k = parts[1];
      if (k == "csv") {
        cfg.outputs.csv = value;
      } else if (k == "trace") {
        cfg.outputs.trace_hex = false;
        cfg.outputs.trace_pcap = false;
        std::istringstream opts(value);
        std::string opt;
        while (std::getline(opts, opt, ',')) {
          opt = trim(opt);
          if (opt == "hex")
            cfg.outputs.trace_hex = true;
          else if (opt == "pcap")
            cfg.outputs.trace_pcap = true;
          else if (opt == "none")
            ;
          else
            throw ConfigError(key, "trace options are none, hex, pcap");
        }
      } else if (k == "strict_ethernet") {
        cfg.outputs.strict_ethernet = parse_bool(value, key);
      } else if (k == "counters_interval") {
        cfg.outputs.counters_interval_ns = parse_time_ns(value, key);
      } else {
        throw ConfigError(key, "unknown outputs key");
      }
    } else {
      throw ConfigError(key, "unknown section or malformed key");
    }
  }

  for (auto& [idx, src] : sources) {
    if (idx != cfg.sources.size())
      throw ConfigError("sources." + std::to_string(idx),
                        "source indices must be contiguous from 0");
    cfg.sources.push_back(src);
  }
  cfg.validate();
  return cfg;
}

std::vector<std::uint16_t> ScenarioConfig::shared_members() const {
  std::vector<std::uint16_t> out;
  for (const auto& [vid, sub] : subscribers)
    if (sub.plan == PlanKind::kSharedExcess) out.push_back(vid);
  return out;
}

std::int64_t ScenarioConfig::group_tbf_rate_bps() const {
  if (group && group->tbf_rate_bps) return *group->tbf_rate_bps;
  std::int64_t sum = 0;
  for (const auto& [vid, sub] : subscribers)
    if (sub.plan == PlanKind::kSharedExcess) sum += sub.token_rate_bps;
  return sum;
}

std::int64_t ScenarioConfig::group_tbf_bucket_bits() const {
  if (group && group->tbf_bucket_bits) return *group->tbf_bucket_bits;
  std::int64_t sum = 0;
  for (const auto& [vid, sub] : subscribers)
    if (sub.plan == PlanKind::kSharedExcess) sum += sub.bucket_bits;
  return sum;
}

void ScenarioConfig::validate() const {
  if (subscribers.empty())
    throw ConfigError("subscribers", "at least one subscriber is required");
  for (const auto& [vid, sub] : subscribers) {
    std::string base = "subscribers." + std::to_string(vid);
    if (sub.token_rate_bps <= 0)
      throw ConfigError(base + ".token_rate", "token rate must be > 0");
    if (sub.bucket_bits < kMaxWireFrameBytes * 8)
      throw ConfigError(base + ".bucket_size",
                        "bucket must hold at least one maximum frame (" +
                            std::to_string(kMaxWireFrameBytes * 8) + "b)");
  }

  auto members = shared_members();
  if (!members.empty()) {
    if (!group)
      throw ConfigError("group",
                        "shared-plan subscribers require a group section");
    if (group->svid == 0)
      throw ConfigError("group.svid", "group S-VID is required");
    if (subscribers.count(group->svid))
      throw ConfigError("group.svid",
                        "S-VID collides with a subscriber C-VID");
    if (group->csfq_window_ns <= 0)
      throw ConfigError("group.csfq_window", "window must be positive");
    if (group_tbf_rate_bps() <= 0)
      throw ConfigError("group.tbf_rate", "group rate must be > 0");
    if (group_tbf_bucket_bits() < kMaxWireFrameBytes * 8)
      throw ConfigError("group.tbf_bucket",
                        "bucket must hold at least one maximum frame");
  } else if (group) {
    throw ConfigError("group",
                      "group section present but no shared-plan subscribers");
  }

  for (std::size_t i = 0; i < sources.size(); ++i) {
    std::string base = "sources." + std::to_string(i);
    const SourceSpec& src = sources[i];
    if (!subscribers.count(src.subscriber))
      throw ConfigError(base + ".subscriber",
                        "unknown subscriber " + std::to_string(src.subscriber));
    try {
      src.validate();
    } catch (const std::exception& e) {
      throw ConfigError(base, e.what());
    }
    if (src.stop_ns != 0 && src.stop_ns > run.duration_ns && run.duration_ns)
      throw ConfigError(base + ".stop", "stop is past the run duration");
  }

  if (run.duration_ns <= 0)
    throw ConfigError("run.duration", "duration must be > 0");
  if (run.warmup_fraction < 0.0 || run.warmup_fraction >= 1.0)
    throw ConfigError("run.warmup", "warmup fraction must lie in [0, 1)");

  // The shaper bank must fit on the shared trunk, or shaped traffic would
  // queue behind the link instead of the buckets.
  std::int64_t shaped = 0;
  for (const auto& [vid, sub] : subscribers)
    if (sub.plan == PlanKind::kLegacyFlatRate) shaped += sub.token_rate_bps;
  if (!members.empty()) shaped += group_tbf_rate_bps();
  if (shaped > topology.shared_link.rate_bps)
    throw ConfigError("topology.shared_link_rate",
                      "sum of shaper rates exceeds the shared link capacity");
  for (auto [name, link] :
       {std::pair<const char*, LinkParams>{"topology.host_link_rate",
                                           topology.host_link},
        {"topology.inner_link_rate", topology.inner_link},
        {"topology.shared_link_rate", topology.shared_link},
        {"topology.drop_link_rate", topology.drop_link}}) {
    if (link.rate_bps <= 0) throw ConfigError(name, "link rate must be > 0");
    if (link.delay_ns < 0) throw ConfigError(name, "link delay must be >= 0");
  }
}

std::string ScenarioConfig::dump() const {
  std::ostringstream out;
  out << "topology.host_link_rate = " << format_rate(topology.host_link.rate_bps)
      << "\n";
  out << "topology.host_link_delay = " << format_time(topology.host_link.delay_ns)
      << "\n";
  out << "topology.inner_link_rate = "
      << format_rate(topology.inner_link.rate_bps) << "\n";
  out << "topology.inner_link_delay = "
      << format_time(topology.inner_link.delay_ns) << "\n";
  out << "topology.shared_link_rate = "
      << format_rate(topology.shared_link.rate_bps) << "\n";
  out << "topology.shared_link_delay = "
      << format_time(topology.shared_link.delay_ns) << "\n";
  out << "topology.drop_link_rate = " << format_rate(topology.drop_link.rate_bps)
      << "\n";
  out << "topology.drop_link_delay = "
      << format_time(topology.drop_link.delay_ns) << "\n";
  out << "topology.fdb_aging = " << format_time(topology.fdb_aging_ns) << "\n";

  for (const auto& [vid, sub] : subscribers) {
    std::string base = "subscribers." + std::to_string(vid);
    out << base << ".plan = "
        << (sub.plan == PlanKind::kSharedExcess ? "shared" : "legacy") << "\n";
    out << base << ".token_rate = " << format_rate(sub.token_rate_bps) << "\n";
    out << base << ".bucket_size = " << format_bits(sub.bucket_bits) << "\n";
  }

  if (group) {
    out << "group.svid = " << group->svid << "\n";
    out << "group.scheduler = "
        << (group->scheduler == InnerScheduler::kCsfq ? "csfq" : "drr") << "\n";
    out << "group.tbf_rate = "
        << (group->tbf_rate_bps ? format_rate(*group->tbf_rate_bps)
                                : std::string("sum"))
        << "\n";
    out << "group.tbf_bucket = "
        << (group->tbf_bucket_bits ? format_bits(*group->tbf_bucket_bits)
                                   : std::string("sum"))
        << "\n";
    out << "group.csfq_window = " << format_time(group->csfq_window_ns) << "\n";
  }

  for (std::size_t i = 0; i < sources.size(); ++i) {
    const SourceSpec& src = sources[i];
    std::string base = "sources." + std::to_string(i);
    const char* kind = src.kind == SourceKind::kCbr
                           ? "cbr"
                           : src.kind == SourceKind::kPoisson ? "poisson"
                                                              : "onoff";
    out << base << ".kind = " << kind << "\n";
    out << base << ".subscriber = " << src.subscriber << "\n";
    out << base << ".rate = " << format_rate(src.mean_rate_bps) << "\n";
    out << base << ".frame_size = " << src.frame_min;
    if (src.frame_max != src.frame_min) out << ":" << src.frame_max;
    out << "\n";
    out << base << ".start = " << format_time(src.start_ns) << "\n";
    if (src.stop_ns != 0)
      out << base << ".stop = " << format_time(src.stop_ns) << "\n";
    if (src.kind == SourceKind::kOnOff) {
      out << base << ".mean_on = " << format_time(src.mean_on_ns) << "\n";
      out << base << ".mean_off = " << format_time(src.mean_off_ns) << "\n";
    }
  }

  out << "run.duration = " << format_time(run.duration_ns) << "\n";
  out << "run.seed = " << run.seed << "\n";
  out << "run.warmup = " << run.warmup_fraction << "\n";
  out << "run.hello = " << (run.hello ? "on" : "off") << "\n";

  out << "outputs.csv = " << outputs.csv << "\n";
  out << "outputs.trace = ";
  if (!outputs.trace_hex && !outputs.trace_pcap) {
    out << "none";
  } else {
    if (outputs.trace_hex) out << "hex";
    if (outputs.trace_hex && outputs.trace_pcap) out << ",";
    if (outputs.trace_pcap) out << "pcap";
  }
  out << "\n";
  out << "outputs.strict_ethernet = " << (outputs.strict_ethernet ? "on" : "off")
      << "\n";
  out << "outputs.counters_interval = "
      << format_time(outputs.counters_interval_ns) << "\n";
  return out.str();
}

}  // namespace svsim
