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

#include "svsim/access_network.hpp"

#include <algorithm>

namespace svsim {

namespace {

// Transit queues between switches; generous so they never bind results.
constexpr std::uint64_t kTransitFifoFrames = 1000;
// Per-shaper FIFO in front of each token bucket.
constexpr std::uint64_t kTbfFifoFrames = 500;
// Per-flow queue of the DRR inner scheduler.
constexpr std::uint64_t kDrrFlowFrames = 100;
// FIFO behind the CSFQ dropper; kept modest so drops, not queueing order,
// enforce the shares.
constexpr std::uint64_t kCsfqFifoFrames = 100;
// Host NIC queue.
constexpr std::uint64_t kHostFifoFrames = 2000;

constexpr std::uint16_t kHelloEthertype = 0x88B5;  // local experimental

}  // namespace

MacAddress AccessNetwork::subscriber_mac(std::uint16_t vid) {
  return MacAddress{{0x02, 0x00, 0x00, 0x00,
                     static_cast<std::uint8_t>(vid >> 8),
                     static_cast<std::uint8_t>(vid & 0xFF)}};
}

MacAddress AccessNetwork::server_mac(std::uint16_t vid) {
  return MacAddress{{0x02, 0x00, 0x00, 0x01,
                     static_cast<std::uint8_t>(vid >> 8),
                     static_cast<std::uint8_t>(vid & 0xFF)}};
}

AccessNetwork::AccessNetwork(const ScenarioConfig& config) : config_(config) {
  config_.validate();
  build();
}

std::unique_ptr<QueueElement> AccessNetwork::transit_fifo() {
  auto q = std::make_unique<FifoQueue>(
      kTransitFifoFrames * static_cast<std::uint64_t>(kMaxWireFrameBytes));
  q->on_drop = [this](const SimFrame& f, Tick t) { metrics_.record_drop(f, t); };
  return q;
}

std::unique_ptr<QueueElement> AccessNetwork::host_fifo() {
  auto q = std::make_unique<FifoQueue>(
      kHostFifoFrames * static_cast<std::uint64_t>(kMaxWireFrameBytes));
  q->on_drop = [this](const SimFrame& f, Tick t) { metrics_.record_drop(f, t); };
  return q;
}

void AccessNetwork::register_element(std::string name, QueueElement* e) {
  elements_.push_back({std::move(name), e});
}

void AccessNetwork::build() {
  const TopologyConfig& topo = config_.topology;
  auto members = config_.shared_members();
  const bool hybrid = !members.empty();

  olt_ = net_.add_switch("olt", topo.fdb_aging_ns);
  dist_ = net_.add_switch("dist", topo.fdb_aging_ns);

  // olt downstream trunk: the shaper bank in front of the shared link.
  auto bank = std::make_unique<ShaperBank>();
  for (const auto& [vid, sub] : config_.subscribers) {
    if (sub.plan == PlanKind::kLegacyFlatRate)
      bank->add_shaper(vid, {sub.token_rate_bps, sub.bucket_bits},
                       kTbfFifoFrames *
                           static_cast<std::uint64_t>(kMaxWireFrameBytes));
  }
  if (hybrid)
    bank->add_shaper(config_.group->svid,
                     {config_.group_tbf_rate_bps(),
                      config_.group_tbf_bucket_bits()},
                     kTbfFifoFrames *
                         static_cast<std::uint64_t>(kMaxWireFrameBytes));
  bank->on_drop = [this](const SimFrame& f, Tick t) {
    metrics_.record_drop(f, t);
  };
  uplink_bank_ = bank.get();
  register_element("olt.trunk.shapers", uplink_bank_);
  int olt_down = olt_->add_port(PortRole::trunk(), std::move(bank));

  int dist_up = dist_->add_port(PortRole::trunk(), transit_fifo());
  register_element("dist.up.fifo", dist_->port(dist_up).egress.get());
  net_.connect(olt_, olt_down, dist_, dist_up, topo.shared_link);

  // olt_c and the inner excess-bandwidth scheduler.
  if (hybrid) {
    olt_c_ = net_.add_switch("olt_c", topo.fdb_aging_ns);
    std::unique_ptr<QueueElement> inner;
    if (config_.group->scheduler == InnerScheduler::kDrr) {
      auto drr = std::make_unique<DrrScheduler>(kDrrFlowFrames);
      for (std::uint16_t vid : members)
        drr->add_flow(vid, config_.subscribers.at(vid).token_rate_bps);
      drr->assign_quanta();
      inner_drr_ = drr.get();
      inner = std::move(drr);
    } else {
      auto csfq = std::make_unique<CsfqQueue>(
          topo.inner_link.rate_bps, config_.group->csfq_window_ns,
          kCsfqFifoFrames * static_cast<std::uint64_t>(kMaxWireFrameBytes),
          RngStream(config_.run.seed,
                    stream_id("csfq/" +
                              std::to_string(config_.group->svid))));
      inner_csfq_ = csfq.get();
      inner = std::move(csfq);
    }
    inner->on_drop = [this](const SimFrame& f, Tick t) {
      metrics_.record_drop(f, t);
    };
    register_element("olt_c.up.scheduler", inner.get());
    int oltc_up = olt_c_->add_port(PortRole::trunk(), std::move(inner));

    std::set<std::uint16_t> member_set(members.begin(), members.end());
    int olt_to_oltc = olt_->add_port(
        PortRole::strunk(config_.group->svid, member_set), transit_fifo());
    register_element("olt.group.fifo", olt_->port(olt_to_oltc).egress.get());
    net_.connect(olt_c_, oltc_up, olt_, olt_to_oltc, topo.inner_link);
  }

  // Per-subscriber ONU, subscriber host and server-side host.
  for (const auto& [vid, sub] : config_.subscribers) {
    bool shared = sub.plan == PlanKind::kSharedExcess;
    SwitchNode* onu =
        net_.add_switch("onu" + std::to_string(vid), topo.fdb_aging_ns);
    int onu_up = onu->add_port(PortRole::trunk(), transit_fifo());
    int onu_host = onu->add_port(PortRole::access(vid), transit_fifo());

    PortRole dist_role =
        shared ? PortRole::strunk(config_.group->svid, {vid})
               : PortRole::trunk();
    int dist_port = dist_->add_port(dist_role, transit_fifo());
    net_.connect(dist_, dist_port, onu, onu_up, topo.drop_link);

    HostNode* sub_host = net_.add_host("sub" + std::to_string(vid),
                                       subscriber_mac(vid), vid);
    sub_host->add_port(PortRole::trunk(), host_fifo());
    net_.connect(onu, onu_host, sub_host, 0, topo.host_link);
    sub_host->on_deliver = [this](const SimFrame& f, Tick t) {
      metrics_.record_delivery(f, t);
    };
    sub_hosts_[vid] = sub_host;

    HostNode* srv_host =
        net_.add_host("srv" + std::to_string(vid), server_mac(vid), vid);
    srv_host->add_port(PortRole::trunk(), host_fifo());
    srv_host->on_deliver = [this](const SimFrame& f, Tick t) {
      metrics_.record_delivery(f, t);
    };
    srv_hosts_[vid] = srv_host;

    // Shared-plan servers enter at olt_c, legacy servers at the olt.
    SwitchNode* edge = shared ? olt_c_ : olt_;
    int edge_port = edge->add_port(PortRole::access(vid), transit_fifo());
    net_.connect(edge, edge_port, srv_host, 0, topo.host_link);
  }

  schedule_hellos();
  schedule_csfq_windows();
  schedule_counter_samples();
  start_sources();
}

void AccessNetwork::schedule_hellos() {
  if (!config_.run.hello) return;
  // Hosts announce themselves at staggered nanoseconds so every relay on the
  // path learns their station before data flows.
  Tick t = 0;
  auto hello_from = [this](HostNode* host, Tick when) {
    loop_.at(when, [this, host](Tick now) {
      SimFrame f;
      f.frame.dst = MacAddress::broadcast();
      f.frame.src = host->mac();
      f.frame.ethertype = kHelloEthertype;
      f.frame.payload.assign(46, 0);
      f.injected = now;
      f.subscriber = host->subscriber();
      f.control = true;
      f.id = next_frame_id_++;
      host->send(std::move(f), now);
    });
  };
  for (const auto& [vid, host] : sub_hosts_) hello_from(host, t++);
  for (const auto& [vid, host] : srv_hosts_) hello_from(host, t++);
}

void AccessNetwork::schedule_csfq_windows() {
  if (!inner_csfq_) return;
  Tick w = inner_csfq_->window();
  timers_.emplace_back();
  auto* tick = &timers_.back();
  *tick = [this, w, tick](Tick now) {
    inner_csfq_->on_window(now);
    if (now + w <= config_.run.duration_ns) loop_.at(now + w, *tick);
  };
  loop_.at(w, *tick);
}

void AccessNetwork::schedule_counter_samples() {
  Tick interval = config_.outputs.counters_interval_ns;
  if (interval <= 0) return;
  timers_.emplace_back();
  auto* sample = &timers_.back();
  *sample = [this, interval, sample](Tick now) {
    for (const ElementRef& ref : elements_)
      counter_samples_.push_back({now, ref.name, ref.element->counters()});
    if (uplink_bank_) {
      for (std::uint16_t vid : uplink_bank_->vids())
        counter_samples_.push_back({now, "tbf." + std::to_string(vid),
                                    uplink_bank_->shaper(vid)->counters()});
    }
    auto per_flow = [this, now](
        const std::vector<std::pair<std::uint16_t, ElementCounters>>& flows) {
      for (const auto& [vid, counters] : flows)
        counter_samples_.push_back(
            {now, "olt_c.up.flow." + std::to_string(vid), counters});
    };
    if (inner_drr_) per_flow(inner_drr_->flow_counters());
    if (inner_csfq_) per_flow(inner_csfq_->flow_counters());
    if (now + interval <= config_.run.duration_ns)
      loop_.at(now + interval, *sample);
  };
  loop_.at(interval, *sample);
}

void AccessNetwork::emit_from_source(std::size_t index, Tick t,
                                     std::int32_t frame_bytes) {
  const SourceSpec& spec = config_.sources[index];
  SimFrame f;
  f.frame.dst = subscriber_mac(spec.subscriber);
  f.frame.src = server_mac(spec.subscriber);
  f.frame.ethertype = 0x0800;
  f.frame.payload.assign(
      static_cast<std::size_t>(frame_bytes) - kEthHeaderBytes - kFcsBytes, 0);
  f.injected = t;
  f.subscriber = spec.subscriber;
  f.id = next_frame_id_++;
  metrics_.record_offered(spec.subscriber,
                          static_cast<std::uint32_t>(f.payload_bytes()));
  srv_hosts_.at(spec.subscriber)->send(std::move(f), t);
}

void AccessNetwork::start_sources() {
  // Stream ids key on (subscriber, per-subscriber ordinal) so a subscriber's
  // draws survive other subscribers being added or removed from a scenario.
  std::map<std::uint16_t, int> ordinal;
  for (std::size_t i = 0; i < config_.sources.size(); ++i) {
    const SourceSpec& spec = config_.sources[i];
    int n = ordinal[spec.subscriber]++;
    auto stream = stream_id("source/" + std::to_string(spec.subscriber) + "/" +
                            std::to_string(n));
    arrivals_.push_back(std::make_unique<ArrivalProcess>(
        spec, RngStream(config_.run.seed, stream)));
  }

  for (std::size_t i = 0; i < arrivals_.size(); ++i) {
    chains_.emplace_back();
    auto* chain = &chains_.back();
    *chain = [this, i, chain]() {
      auto next = arrivals_[i]->next();
      if (!next || next->first > config_.run.duration_ns) return;
      auto [t, bytes] = *next;
      loop_.at(t, [this, i, bytes, chain](Tick now) {
        emit_from_source(i, now, bytes);
        (*chain)();
      });
    };
    (*chain)();
  }
}

void AccessNetwork::run() { loop_.run_until(config_.run.duration_ns); }

std::vector<SummaryRow> AccessNetwork::summarize() const {
  std::vector<SummaryRow> rows;
  rows.reserve(config_.subscribers.size());
  for (const auto& [vid, sub] : config_.subscribers) {
    rows.push_back(metrics_.summarize(
        vid, sub.plan == PlanKind::kSharedExcess ? "shared" : "legacy",
        warmup_end(), config_.run.duration_ns));
  }
  return rows;
}

std::vector<ShaperVerdict> AccessNetwork::conformance_verdicts() const {
  std::vector<ShaperVerdict> verdicts;
  if (!uplink_bank_) return verdicts;
  std::vector<std::uint16_t> vids = uplink_bank_->vids();
  std::sort(vids.begin(), vids.end());
  for (std::uint16_t vid : vids) {
    TbfShaper* s = uplink_bank_->shaper(vid);
    const auto& params = s->bucket().params();
    bool group = config_.group && vid == config_.group->svid;
    verdicts.push_back({vid, group, params.rate_bps, params.bucket_bits,
                        s->counters().departed_frames,
                        tbf_conformant(s->departures(), params.rate_bps,
                                       params.bucket_bits)});
  }
  return verdicts;
}

}  // namespace svsim
