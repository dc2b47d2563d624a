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

#include "svsim/traffic_control.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace svsim {

// ---------------------------------------------------------------------------
// TbfShaper

bool TbfShaper::offer(SimFrame frame, Tick now) {
  counters_.offered_frames++;
  counters_.offered_bytes += frame.wire_bytes();
  if (bytes_ + frame.wire_bytes() > capacity_bytes_) {
    counters_.dropped_frames++;
    counters_.dropped_bytes += frame.wire_bytes();
    if (on_drop) on_drop(frame, now);
    return false;
  }
  bytes_ += frame.wire_bytes();
  counters_.accepted_frames++;
  counters_.accepted_bytes += frame.wire_bytes();
  fifo_.push_back(std::move(frame));
  return true;
}

std::optional<Tick> TbfShaper::head_ready(Tick now) {
  if (fifo_.empty()) return std::nullopt;
  return bucket_.earliest_conformance(fifo_.front().wire_bits(), now);
}

SimFrame TbfShaper::take(Tick now) {
  assert(!fifo_.empty());
  SimFrame f = std::move(fifo_.front());
  fifo_.pop_front();
  bytes_ -= f.wire_bytes();
  std::int64_t bits = f.wire_bits();
  bucket_.refill(now);
  assert(bucket_.level_nanobits() >= bits * kNsPerSec);
  bucket_.charge(bits);
  counters_.departed_frames++;
  counters_.departed_bytes += f.wire_bytes();
  if (record_departures_) departures_.push_back({now, bits});
  return f;
}

// ---------------------------------------------------------------------------
// ShaperBank

void ShaperBank::add_shaper(std::uint16_t vid, TokenBucketParams params,
                            std::uint64_t fifo_capacity_bytes) {
  params.validate();
  if (shapers_.count(vid))
    throw std::invalid_argument("duplicate shaper vid " + std::to_string(vid));
  auto [it, inserted] =
      shapers_.emplace(vid, TbfShaper(params, fifo_capacity_bytes));
  it->second.set_record_departures(true);
  it->second.on_drop = [this](const SimFrame& f, Tick t) {
    counters_.dropped_frames++;
    counters_.dropped_bytes += f.wire_bytes();
    if (on_drop) on_drop(f, t);
  };
  order_.push_back(vid);
}

bool ShaperBank::offer(SimFrame frame, Tick now) {
  count_offer(frame);
  auto vid = frame.frame.outer_vid();
  auto it = vid ? shapers_.find(*vid) : shapers_.end();
  if (it == shapers_.end()) {
    unclassified_++;
    count_drop(frame, now);
    return false;
  }
  std::uint64_t wire = frame.wire_bytes();
  if (!it->second.offer(std::move(frame), now)) return false;
  counters_.accepted_frames++;
  counters_.accepted_bytes += wire;
  return true;
}

std::optional<Tick> ShaperBank::next_ready(Tick now) {
  std::optional<Tick> best;
  for (auto& [vid, shaper] : shapers_) {
    auto t = shaper.head_ready(now);
    if (t && (!best || *t < *best)) best = t;
  }
  return best;
}

SimFrame ShaperBank::take(Tick now) {
  // Round-robin among the shapers whose head frame is conformant now.
  assert(!order_.empty());
  for (std::size_t k = 0; k < order_.size(); ++k) {
    std::size_t idx = (rr_next_ + k) % order_.size();
    TbfShaper& s = shapers_.at(order_[idx]);
    auto t = s.head_ready(now);
    if (t && *t <= now) {
      rr_next_ = (idx + 1) % order_.size();
      SimFrame f = s.take(now);
      count_depart(f);
      return f;
    }
  }
  throw std::logic_error("ShaperBank::take with no conformant head");
}

std::uint64_t ShaperBank::queued_bytes() const {
  std::uint64_t total = 0;
  for (const auto& [vid, shaper] : shapers_) total += shaper.queued_bytes();
  return total;
}

void ShaperBank::for_each_queued(
    const std::function<void(const SimFrame&)>& fn) const {
  for (const auto& [vid, shaper] : shapers_) shaper.for_each_queued(fn);
}

TbfShaper* ShaperBank::shaper(std::uint16_t vid) {
  auto it = shapers_.find(vid);
  return it == shapers_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// DRR

std::vector<std::int64_t> drr_quanta(const std::vector<std::int64_t>& rates_bps,
                                     std::int64_t max_frame_bytes) {
  if (rates_bps.empty()) return {};
  std::int64_t min_rate = rates_bps.front();
  for (std::int64_t r : rates_bps) {
    if (r <= 0)
      throw std::invalid_argument("DRR flow rate must be > 0");
    min_rate = std::min(min_rate, r);
  }
  std::vector<std::int64_t> quanta;
  quanta.reserve(rates_bps.size());
  for (std::int64_t r : rates_bps) {
    __int128 num = static_cast<__int128>(max_frame_bytes) * r;
    quanta.push_back(static_cast<std::int64_t>((num + min_rate - 1) / min_rate));
  }
  return quanta;
}

void DrrScheduler::add_flow(std::uint16_t vid, std::int64_t rate_bps) {
  if (rate_bps <= 0)
    throw std::invalid_argument("DRR flow rate must be > 0");
  if (find(vid)) throw std::invalid_argument("duplicate DRR flow vid");
  Flow flow;
  flow.vid = vid;
  flow.rate_bps = rate_bps;
  flows_.push_back(std::move(flow));
}

void DrrScheduler::assign_quanta(std::int64_t max_frame_bytes) {
  std::vector<std::int64_t> rates;
  rates.reserve(flows_.size());
  for (const Flow& f : flows_) rates.push_back(f.rate_bps);
  auto quanta = drr_quanta(rates, max_frame_bytes);
  for (std::size_t i = 0; i < flows_.size(); ++i)
    flows_[i].quantum_bytes = quanta[i];
}

DrrScheduler::Flow* DrrScheduler::find(std::uint16_t vid) {
  for (Flow& f : flows_)
    if (f.vid == vid) return &f;
  return nullptr;
}

std::int64_t DrrScheduler::quantum(std::uint16_t vid) const {
  for (const Flow& f : flows_)
    if (f.vid == vid) return f.quantum_bytes;
  return 0;
}

bool DrrScheduler::offer(SimFrame frame, Tick now) {
  count_offer(frame);
  auto vid = frame.frame.outer_vid();
  Flow* flow = vid ? find(*vid) : nullptr;
  if (!flow) {
    unclassified_++;
    count_drop(frame, now);
    return false;
  }
  flow->counters.offered_frames++;
  flow->counters.offered_bytes += frame.wire_bytes();
  if (flow->bytes + frame.wire_bytes() > per_flow_capacity_bytes_) {
    flow->counters.dropped_frames++;
    flow->counters.dropped_bytes += frame.wire_bytes();
    count_drop(frame, now);
    return false;
  }
  bool was_empty = flow->queue.empty();
  flow->bytes += frame.wire_bytes();
  count_accept(frame);
  flow->counters.accepted_frames++;
  flow->counters.accepted_bytes += frame.wire_bytes();
  flow->queue.push_back(std::move(frame));
  if (was_empty) {
    flow->deficit_bytes = 0;
    flow->credited = false;
    active_.push_back(static_cast<std::size_t>(flow - flows_.data()));
  }
  return true;
}

std::optional<Tick> DrrScheduler::next_ready(Tick now) {
  if (active_.empty()) return std::nullopt;
  return now;
}

SimFrame DrrScheduler::take(Tick now) {
  assert(!active_.empty());
  while (true) {
    std::size_t idx = active_.front();
    Flow& flow = flows_[idx];
    if (!flow.credited) {
      flow.deficit_bytes += flow.quantum_bytes;
      flow.credited = true;
    }
    std::int64_t head = static_cast<std::int64_t>(flow.queue.front().wire_bytes());
    if (head <= flow.deficit_bytes) {
      SimFrame f = std::move(flow.queue.front());
      flow.queue.pop_front();
      flow.deficit_bytes -= head;
      flow.bytes -= f.wire_bytes();
      flow.counters.departed_frames++;
      flow.counters.departed_bytes += f.wire_bytes();
      if (flow.queue.empty()) {
        // Emptied flows leave the round and forfeit their deficit.
        flow.deficit_bytes = 0;
        flow.credited = false;
        active_.pop_front();
      }
      count_depart(f);
      return f;
    }
    // Head does not fit; carry the deficit into the next round.
    flow.credited = false;
    active_.pop_front();
    active_.push_back(idx);
  }
  (void)now;
}

std::vector<std::pair<std::uint16_t, ElementCounters>>
DrrScheduler::flow_counters() const {
  std::vector<std::pair<std::uint16_t, ElementCounters>> out;
  out.reserve(flows_.size());
  for (const Flow& f : flows_) out.push_back({f.vid, f.counters});
  return out;
}

std::uint64_t DrrScheduler::queued_bytes() const {
  std::uint64_t total = 0;
  for (const Flow& f : flows_) total += f.bytes;
  return total;
}

void DrrScheduler::for_each_queued(
    const std::function<void(const SimFrame&)>& fn) const {
  for (const Flow& f : flows_)
    for (const auto& frame : f.queue) fn(frame);
}

// ---------------------------------------------------------------------------
// CSFQ

CsfqQueue::CsfqQueue(std::int64_t link_rate_bps, Tick averaging_window,
                     std::uint64_t fifo_capacity_bytes, RngStream rng)
    : link_rate_bps_(link_rate_bps),
      window_(averaging_window),
      capacity_bytes_(fifo_capacity_bytes),
      rng_(rng),
      fair_share_bps_(static_cast<double>(link_rate_bps)) {
  if (link_rate_bps <= 0) throw std::invalid_argument("CSFQ link rate <= 0");
  if (averaging_window <= 0) throw std::invalid_argument("CSFQ window <= 0");
}

double CsfqQueue::update_rate_estimate(double old_rate_bps, std::int64_t bits,
                                       Tick gap, Tick window) {
  double k = ticks_to_seconds(window);
  if (gap <= 0) {
    // Limit of the update as the gap goes to zero.
    return old_rate_bps + static_cast<double>(bits) / k;
  }
  double t = ticks_to_seconds(gap);
  double w = std::exp(-t / k);
  return (1.0 - w) * (static_cast<double>(bits) / t) + w * old_rate_bps;
}

bool CsfqQueue::offer(SimFrame frame, Tick now) {
  count_offer(frame);
  std::uint16_t vid = frame.frame.outer_vid().value_or(0);
  std::int64_t bits = frame.wire_bits();
  window_arrived_bits_ += static_cast<std::uint64_t>(bits);

  ElementCounters& fc = flow_counters_[vid];
  fc.offered_frames++;
  fc.offered_bytes += frame.wire_bytes();

  FlowMeter& m = meters_[vid];
  if (!m.seen) {
    m.rate_bps = static_cast<double>(bits) / ticks_to_seconds(window_);
    m.seen = true;
  } else {
    m.rate_bps = update_rate_estimate(m.rate_bps, bits, now - m.last_arrival,
                                      window_);
  }
  m.last_arrival = now;

  double p = 0.0;
  if (m.rate_bps > fair_share_bps_) p = 1.0 - fair_share_bps_ / m.rate_bps;
  if ((p > 0.0 && rng_.bernoulli(p)) ||
      bytes_ + frame.wire_bytes() > capacity_bytes_) {
    fc.dropped_frames++;
    fc.dropped_bytes += frame.wire_bytes();
    count_drop(frame, now);
    return false;
  }
  bytes_ += frame.wire_bytes();
  count_accept(frame);
  fc.accepted_frames++;
  fc.accepted_bytes += frame.wire_bytes();
  fifo_.push_back(std::move(frame));
  return true;
}

std::optional<Tick> CsfqQueue::next_ready(Tick now) {
  if (fifo_.empty()) return std::nullopt;
  return now;
}

SimFrame CsfqQueue::take(Tick) {
  SimFrame f = std::move(fifo_.front());
  fifo_.pop_front();
  bytes_ -= f.wire_bytes();
  count_depart(f);
  if (auto vid = f.frame.outer_vid()) {
    ElementCounters& fc = flow_counters_[*vid];
    fc.departed_frames++;
    fc.departed_bytes += f.wire_bytes();
  }
  return f;
}

std::vector<std::pair<std::uint16_t, ElementCounters>>
CsfqQueue::flow_counters() const {
  std::vector<std::pair<std::uint16_t, ElementCounters>> out;
  out.reserve(flow_counters_.size());
  for (const auto& [vid, c] : flow_counters_) out.push_back({vid, c});
  return out;
}

std::uint64_t CsfqQueue::queued_bytes() const { return bytes_; }

void CsfqQueue::for_each_queued(
    const std::function<void(const SimFrame&)>& fn) const {
  for (const auto& f : fifo_) fn(f);
}

double CsfqQueue::decayed_rate(const FlowMeter& m, Tick now) const {
  // A flow active within the current window keeps its estimate; beyond that
  // the estimate ages the same way the per-arrival update would.
  Tick idle = now - m.last_arrival;
  if (idle <= window_) return m.rate_bps;
  return m.rate_bps * std::exp(-ticks_to_seconds(idle - window_) /
                               ticks_to_seconds(window_));
}

double CsfqQueue::rate_estimate(std::uint16_t vid) const {
  auto it = meters_.find(vid);
  return it == meters_.end() ? 0.0 : it->second.rate_bps;
}

void CsfqQueue::on_window(Tick now) {
  Tick span = now - window_start_;
  if (span <= 0) return;
  double arrival_bps =
      static_cast<double>(window_arrived_bits_) / ticks_to_seconds(span);
  congested_ = arrival_bps > static_cast<double>(link_rate_bps_);
  update_fair_share(now);
  window_arrived_bits_ = 0;
  window_start_ = now;

  // Flows silent for many windows have decayed to irrelevance.
  for (auto it = meters_.begin(); it != meters_.end();) {
    if (now - it->second.last_arrival > 10 * window_)
      it = meters_.erase(it);
    else
      ++it;
  }
}

void CsfqQueue::update_fair_share(Tick now) {
  std::vector<double> rates;
  rates.reserve(meters_.size());
  double max_rate = 0.0;
  for (const auto& [vid, m] : meters_) {
    double r = decayed_rate(m, now);
    rates.push_back(r);
    max_rate = std::max(max_rate, r);
  }
  if (rates.empty()) {
    fair_share_bps_ = static_cast<double>(link_rate_bps_);
    congested_ = false;
    return;
  }
  if (congested_) {
    fair_share_bps_ =
        csfq_fair_share(rates, static_cast<double>(link_rate_bps_));
  } else {
    fair_share_bps_ = max_rate;
  }
}

double csfq_fair_share(const std::vector<double>& rates_bps,
                       double capacity_bps) {
  double max_rate = 0.0, total = 0.0;
  for (double r : rates_bps) {
    max_rate = std::max(max_rate, r);
    total += r;
  }
  if (total <= capacity_bps || max_rate <= 0.0) return max_rate;
  double lo = 0.0, hi = max_rate;
  for (int iter = 0; iter < 100; ++iter) {
    double mid = 0.5 * (lo + hi);
    double sum = 0.0;
    for (double r : rates_bps) sum += std::min(r, mid);
    if (sum > capacity_bps)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Conformance

bool tbf_conformant(const std::vector<Departure>& trace,
                    std::int64_t rate_bps, std::int64_t bucket_bits,
                    std::int64_t slack_bits) {
  // Let P_j be bits departed up to and including event j. The envelope
  //   P_j - P_{i-1} <= b + slack + r*(t_j - t_i)   for all i <= j
  // rewrites, with A_j = P_j*1e9 - r*t_j and B_i = P_{i-1}*1e9 - r*t_i, to
  //   A_j - min_{i<=j} B_i <= (b + slack)*1e9
  // so a running minimum checks every pair exactly.
  using I = __int128;
  const I bound = static_cast<I>(bucket_bits + slack_bits) * kNsPerSec;
  I prefix = 0;
  I min_b = 0;
  bool have_min = false;
  for (const Departure& d : trace) {
    I b_i = prefix * kNsPerSec - static_cast<I>(rate_bps) * d.time;
    if (!have_min || b_i < min_b) {
      min_b = b_i;
      have_min = true;
    }
    prefix += d.bits;
    I a_j = prefix * kNsPerSec - static_cast<I>(rate_bps) * d.time;
    if (a_j - min_b > bound) return false;
  }
  return true;
}

}  // namespace svsim
