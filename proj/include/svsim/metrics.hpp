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
// Per-subscriber measurement pipeline. Raw byte counters cover the whole
// run; goodput and delay summaries exclude the warm-up prefix.

#ifndef SVSIM_METRICS_HPP
#define SVSIM_METRICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "svsim/queueing.hpp"
#include "svsim/sim_time.hpp"

namespace svsim {

// Nearest-rank percentile (p in (0, 100]) of an unsorted sample set.
Tick nearest_rank_percentile(std::vector<Tick> samples, double p);

struct Delivery {
  Tick time;
  Tick delay;
  std::uint32_t payload_bytes;
};

struct FlowStats {
  std::uint64_t offered_bytes = 0;    // payload bytes injected at the source
  std::uint64_t delivered_bytes = 0;  // payload bytes accepted by the sink
  std::uint64_t dropped_bytes = 0;    // payload bytes dropped anywhere
  std::uint64_t offered_frames = 0;
  std::uint64_t delivered_frames = 0;
  std::uint64_t dropped_frames = 0;
  std::vector<Delivery> deliveries;
};

struct SummaryRow {
  std::uint16_t subscriber;
  std::string plan;
  std::uint64_t offered_bytes;
  std::uint64_t delivered_bytes;
  std::uint64_t dropped_bytes;
  double goodput_bps;  // payload bits per second, post-warmup
  Tick mean_delay_ns;
  Tick p95_delay_ns;
  Tick p99_delay_ns;
  double drop_ratio;  // dropped/offered bytes over the full run
};

class MetricsHub {
 public:
  void record_offered(std::uint16_t subscriber, std::uint32_t payload_bytes) {
    auto& s = flows_[subscriber];
    s.offered_bytes += payload_bytes;
    s.offered_frames++;
  }

  void record_delivery(const SimFrame& frame, Tick now);

  void record_drop(const SimFrame& frame, Tick now) {
    if (frame.control) return;
    auto& s = flows_[frame.subscriber];
    s.dropped_bytes += frame.payload_bytes();
    s.dropped_frames++;
    (void)now;
  }

  const FlowStats& flow(std::uint16_t subscriber) {
    return flows_[subscriber];
  }
  const std::map<std::uint16_t, FlowStats>& flows() const { return flows_; }

  // Delivered payload bits per second over [from, to).
  double goodput_bps(std::uint16_t subscriber, Tick from, Tick to) const;

  // Delivered-bits time series with window w, covering [0, horizon).
  std::vector<double> throughput_series_bps(std::uint16_t subscriber, Tick w,
                                            Tick horizon) const;

  SummaryRow summarize(std::uint16_t subscriber, const std::string& plan,
                       Tick warmup_end, Tick horizon) const;

 private:
  std::map<std::uint16_t, FlowStats> flows_;
};

}  // namespace svsim

#endif  // SVSIM_METRICS_HPP
