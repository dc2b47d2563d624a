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

#include "svsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace svsim {

Tick nearest_rank_percentile(std::vector<Tick> samples, double p) {
  if (samples.empty()) return 0;
  if (p <= 0.0 || p > 100.0)
    throw std::invalid_argument("percentile must be in (0, 100]");
  std::sort(samples.begin(), samples.end());
  auto rank = static_cast<std::size_t>(
      std::ceil(p / 100.0 * static_cast<double>(samples.size())));
  if (rank == 0) rank = 1;
  return samples[rank - 1];
}

void MetricsHub::record_delivery(const SimFrame& frame, Tick now) {
  if (frame.control) return;
  if (frame.injected > now)
    throw std::logic_error("delivery before injection timestamp");
  auto& s = flows_[frame.subscriber];
  s.delivered_bytes += frame.payload_bytes();
  s.delivered_frames++;
  s.deliveries.push_back(
      {now, now - frame.injected,
       static_cast<std::uint32_t>(frame.payload_bytes())});
}

double MetricsHub::goodput_bps(std::uint16_t subscriber, Tick from,
                               Tick to) const {
  if (to <= from) return 0.0;
  auto it = flows_.find(subscriber);
  if (it == flows_.end()) return 0.0;
  std::uint64_t bits = 0;
  for (const Delivery& d : it->second.deliveries)
    if (d.time >= from && d.time < to)
      bits += static_cast<std::uint64_t>(d.payload_bytes) * 8;
  return static_cast<double>(bits) / ticks_to_seconds(to - from);
}

std::vector<double> MetricsHub::throughput_series_bps(std::uint16_t subscriber,
                                                      Tick w,
                                                      Tick horizon) const {
  std::size_t n = static_cast<std::size_t>((horizon + w - 1) / w);
  std::vector<double> out(n, 0.0);
  auto it = flows_.find(subscriber);
  if (it == flows_.end()) return out;
  for (const Delivery& d : it->second.deliveries) {
    if (d.time >= horizon) continue;
    out[static_cast<std::size_t>(d.time / w)] +=
        static_cast<double>(d.payload_bytes) * 8;
  }
  for (double& v : out) v /= ticks_to_seconds(w);
  return out;
}

SummaryRow MetricsHub::summarize(std::uint16_t subscriber,
                                 const std::string& plan, Tick warmup_end,
                                 Tick horizon) const {
  SummaryRow row{};
  row.subscriber = subscriber;
  row.plan = plan;
  auto it = flows_.find(subscriber);
  const FlowStats empty;
  const FlowStats& s = it == flows_.end() ? empty : it->second;
  row.offered_bytes = s.offered_bytes;
  row.delivered_bytes = s.delivered_bytes;
  row.dropped_bytes = s.dropped_bytes;
  row.goodput_bps = goodput_bps(subscriber, warmup_end, horizon);
  std::vector<Tick> delays;
  delays.reserve(s.deliveries.size());
  __int128 sum = 0;
  for (const Delivery& d : s.deliveries) {
    if (d.time < warmup_end || d.time >= horizon) continue;
    delays.push_back(d.delay);
    sum += d.delay;
  }
  if (!delays.empty()) {
    row.mean_delay_ns =
        static_cast<Tick>(sum / static_cast<__int128>(delays.size()));
    row.p95_delay_ns = nearest_rank_percentile(delays, 95.0);
    row.p99_delay_ns = nearest_rank_percentile(std::move(delays), 99.0);
  }
  row.drop_ratio =
      s.offered_bytes == 0
          ? 0.0
          : static_cast<double>(s.dropped_bytes) /
                static_cast<double>(s.offered_bytes);
  return row;
}

}  // namespace svsim
