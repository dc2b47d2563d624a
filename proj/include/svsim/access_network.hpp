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
// Builds the shared-access topology. Per-subscriber server hosts attach to
// the network head end: shared-plan servers feed the olt_c stage whose
// egress toward the olt runs the excess-bandwidth scheduler (DRR or CSFQ)
// keyed on C-VID; the olt S-tags that traffic on ingress, shapes it with one
// group token bucket next to the legacy per-subscriber buckets, and a
// round-robin arbiter serves conformant frames onto the shared trunk. A
// distribution switch fans out to per-subscriber ONUs, popping the S-TAG
// toward grouped ONUs; ONU access ports deliver untagged frames to hosts.

#ifndef SVSIM_ACCESS_NETWORK_HPP
#define SVSIM_ACCESS_NETWORK_HPP

#include <deque>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "svsim/config.hpp"
#include "svsim/event_loop.hpp"
#include "svsim/metrics.hpp"
#include "svsim/network.hpp"
#include "svsim/traffic_control.hpp"
#include "svsim/traffic_gen.hpp"

namespace svsim {

// A registered egress element, named for counter exports.
struct ElementRef {
  std::string name;
  QueueElement* element;
};

struct ShaperVerdict {
  std::uint16_t vid;
  bool is_group;
  std::int64_t rate_bps;
  std::int64_t bucket_bits;
  std::uint64_t departed_frames;
  bool conformant;
};

struct CounterSample {
  Tick time;
  std::string element;
  ElementCounters counters;
};

class AccessNetwork {
 public:
  explicit AccessNetwork(const ScenarioConfig& config);

  // Runs the scenario to its configured duration.
  void run();

  const ScenarioConfig& config() const { return config_; }
  Network& network() { return net_; }
  EventLoop& loop() { return loop_; }
  MetricsHub& metrics() { return metrics_; }

  HostNode* subscriber_host(std::uint16_t vid) { return sub_hosts_.at(vid); }
  HostNode* server_host(std::uint16_t vid) { return srv_hosts_.at(vid); }
  SwitchNode* olt() { return olt_; }
  SwitchNode* olt_c() { return olt_c_; }
  SwitchNode* distribution() { return dist_; }

  ShaperBank* uplink_bank() { return uplink_bank_; }
  DrrScheduler* inner_drr() { return inner_drr_; }
  CsfqQueue* inner_csfq() { return inner_csfq_; }

  Tick duration() const { return config_.run.duration_ns; }
  Tick warmup_end() const {
    return static_cast<Tick>(static_cast<double>(config_.run.duration_ns) *
                             config_.run.warmup_fraction);
  }

  std::vector<SummaryRow> summarize() const;
  std::vector<ShaperVerdict> conformance_verdicts() const;
  const std::vector<ElementRef>& elements() const { return elements_; }
  const std::vector<CounterSample>& counter_samples() const {
    return counter_samples_;
  }

  // Emits one broadcast frame from the given host right now and returns
  // after the event queue drains; used by scoping tests and `check`.
  static MacAddress subscriber_mac(std::uint16_t vid);
  static MacAddress server_mac(std::uint16_t vid);

 private:
  void build();
  void start_sources();
  void schedule_hellos();
  void schedule_csfq_windows();
  void schedule_counter_samples();
  void emit_from_source(std::size_t index, Tick t, std::int32_t frame_bytes);

  std::unique_ptr<QueueElement> transit_fifo();
  std::unique_ptr<QueueElement> host_fifo();
  void register_element(std::string name, QueueElement* e);

  ScenarioConfig config_;
  EventLoop loop_;
  Network net_{loop_};
  MetricsHub metrics_;

  SwitchNode* olt_ = nullptr;
  SwitchNode* olt_c_ = nullptr;
  SwitchNode* dist_ = nullptr;
  std::map<std::uint16_t, HostNode*> sub_hosts_;
  std::map<std::uint16_t, HostNode*> srv_hosts_;

  ShaperBank* uplink_bank_ = nullptr;
  DrrScheduler* inner_drr_ = nullptr;
  CsfqQueue* inner_csfq_ = nullptr;

  std::vector<ElementRef> elements_;
  std::vector<std::unique_ptr<ArrivalProcess>> arrivals_;
  std::vector<CounterSample> counter_samples_;
  // Self-rescheduling callbacks live here so their addresses stay stable.
  std::deque<std::function<void(Tick)>> timers_;
  std::deque<std::function<void()>> chains_;
  std::uint64_t next_frame_id_ = 1;
};

}  // namespace svsim

#endif  // SVSIM_ACCESS_NETWORK_HPP
