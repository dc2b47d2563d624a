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
// Traffic-control elements: token bucket shaping, deficit round-robin
// scheduling with quanta proportional to subscriber token rates, and a
// core-stateless fair queueing meter/dropper. Token accounting is exact:
// levels are held in nano-bits (1e-9 bit) so that rate * dt over integer
// nanoseconds never accumulates floating-point drift.

#ifndef SVSIM_TRAFFIC_CONTROL_HPP
#define SVSIM_TRAFFIC_CONTROL_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <vector>

#include "svsim/queueing.hpp"
#include "svsim/rng.hpp"
#include "svsim/sim_time.hpp"

namespace svsim {

// Largest C-tagged frame; DRR quanta are expressed in units of it.
inline constexpr std::int64_t kMaxFrameBytes = 1522;
// Largest frame seen on a stacked-VLAN wire (S-TAG + C-TAG).
inline constexpr std::int64_t kMaxWireFrameBytes = 1526;

struct TokenBucketParams {
  std::int64_t rate_bps = 0;     // token generation rate r
  std::int64_t bucket_bits = 0;  // token bucket size b

  void validate() const {
    if (rate_bps <= 0) throw std::invalid_argument("token rate must be > 0");
    if (bucket_bits < kMaxWireFrameBytes * 8)
      throw std::invalid_argument(
          "bucket size must hold at least one maximum frame");
  }
};

// Exact token bucket. Starts full.
class TokenBucket {
 public:
  explicit TokenBucket(TokenBucketParams params)
      : params_(params),
        level_nanobits_(to_nanobits(params.bucket_bits)) {}

  // tokens' = min(b, tokens + r * dt); throws on time regression.
  void refill(Tick now) {
    if (now < last_update_)
      throw std::logic_error("token bucket updated backwards in time");
    __int128 gained = static_cast<__int128>(params_.rate_bps) *
                      (now - last_update_);
    __int128 level = static_cast<__int128>(level_nanobits_) + gained;
    __int128 cap = to_nanobits(params_.bucket_bits);
    level_nanobits_ = static_cast<std::int64_t>(level < cap ? level : cap);
    last_update_ = now;
  }

  bool conforms(std::int64_t bits, Tick now) {
    refill(now);
    return level_nanobits_ >= to_nanobits(bits);
  }

  // Earliest time >= now at which `bits` tokens are available.
  Tick earliest_conformance(std::int64_t bits, Tick now) {
    refill(now);
    __int128 deficit = to_nanobits(bits) - level_nanobits_;
    if (deficit <= 0) return now;
    Tick wait = static_cast<Tick>((deficit + params_.rate_bps - 1) /
                                  params_.rate_bps);
    return now + wait;
  }

  void charge(std::int64_t bits) { level_nanobits_ -= to_nanobits(bits); }

  double level_bits() const { return static_cast<double>(level_nanobits_) / kNsPerSec; }
  std::int64_t level_nanobits() const { return level_nanobits_; }
  Tick last_update() const { return last_update_; }
  const TokenBucketParams& params() const { return params_; }

 private:
  static std::int64_t to_nanobits(std::int64_t bits) {
    return bits * kNsPerSec;
  }

  TokenBucketParams params_;
  std::int64_t level_nanobits_;
  Tick last_update_ = 0;
};

// One departure event of a shaper: used by the conformance checker.
struct Departure {
  Tick time;
  std::int64_t bits;
};

// Token bucket filter: tail-drop FIFO in front of an exact token bucket.
// Frames leave in arrival order, each no earlier than its conformance time.
class TbfShaper {
 public:
  TbfShaper(TokenBucketParams params, std::uint64_t fifo_capacity_bytes)
      : bucket_(params), capacity_bytes_(fifo_capacity_bytes) {}

  bool offer(SimFrame frame, Tick now);

  // Departure time of the head frame, or nullopt when idle.
  std::optional<Tick> head_ready(Tick now);

  // Removes the head frame and charges the bucket; pre: head_ready(now)==now.
  SimFrame take(Tick now);

  bool empty() const { return fifo_.empty(); }
  std::uint64_t queued_bytes() const { return bytes_; }
  const ElementCounters& counters() const { return counters_; }
  const TokenBucket& bucket() const { return bucket_; }

  void set_record_departures(bool on) { record_departures_ = on; }
  const std::vector<Departure>& departures() const { return departures_; }

  std::function<void(const SimFrame&, Tick)> on_drop;

  void for_each_queued(const std::function<void(const SimFrame&)>& fn) const {
    for (const auto& f : fifo_) fn(f);
  }

 private:
  TokenBucket bucket_;
  std::uint64_t capacity_bytes_;
  std::uint64_t bytes_ = 0;
  std::deque<SimFrame> fifo_;
  ElementCounters counters_;
  bool record_departures_ = false;
  std::vector<Departure> departures_;
};

// Bank of TBF shapers classified by outermost VID, its outputs arbitrated
// round-robin among the shapers whose head frame is conformant. This is the
// per-subscriber shaping stage in front of the shared trunk.
class ShaperBank : public QueueElement {
 public:
  void add_shaper(std::uint16_t vid, TokenBucketParams params,
                  std::uint64_t fifo_capacity_bytes);

  bool offer(SimFrame frame, Tick now) override;
  std::optional<Tick> next_ready(Tick now) override;
  SimFrame take(Tick now) override;
  std::uint64_t queued_bytes() const override;
  void for_each_queued(
      const std::function<void(const SimFrame&)>& fn) const override;

  TbfShaper* shaper(std::uint16_t vid);
  const std::vector<std::uint16_t>& vids() const { return order_; }
  std::uint64_t classification_errors() const { return unclassified_; }

 private:
  std::vector<std::uint16_t> order_;  // registration order, RR ring
  std::map<std::uint16_t, TbfShaper> shapers_;
  std::size_t rr_next_ = 0;
  std::uint64_t unclassified_ = 0;
};

// Computes per-flow DRR quanta proportional to token generation rates,
// normalized so the slowest flow gets one maximum frame per round. Rounds up
// to whole bytes. Throws on non-positive rates.
std::vector<std::int64_t> drr_quanta(const std::vector<std::int64_t>& rates_bps,
                                     std::int64_t max_frame_bytes = kMaxFrameBytes);

// Deficit round-robin scheduler over per-flow FIFO queues keyed by C-VID.
// Work-conserving; serves one frame per take() and resumes mid-round, which
// keeps it equivalent to the classic one-packet-at-a-time formulation.
class DrrScheduler : public QueueElement {
 public:
  // Per-flow queue capacity is expressed in frames of kMaxFrameBytes.
  explicit DrrScheduler(std::uint64_t per_flow_capacity_frames = 100)
      : per_flow_capacity_bytes_(per_flow_capacity_frames *
                                 static_cast<std::uint64_t>(kMaxFrameBytes)) {}

  // Registration order fixes the round order. rate_bps feeds the quantum.
  void add_flow(std::uint16_t vid, std::int64_t rate_bps);
  // Recomputes quanta from the registered rates (call after add_flow calls).
  void assign_quanta(std::int64_t max_frame_bytes = kMaxFrameBytes);

  bool offer(SimFrame frame, Tick now) override;
  std::optional<Tick> next_ready(Tick now) override;
  SimFrame take(Tick now) override;
  std::uint64_t queued_bytes() const override;
  void for_each_queued(
      const std::function<void(const SimFrame&)>& fn) const override;

  std::int64_t quantum(std::uint16_t vid) const;
  std::uint64_t classification_errors() const { return unclassified_; }
  // (vid, counters) per registered flow, in registration order.
  std::vector<std::pair<std::uint16_t, ElementCounters>> flow_counters() const;

 private:
  struct Flow {
    std::uint16_t vid = 0;
    std::int64_t rate_bps = 0;
    std::int64_t quantum_bytes = 0;
    std::int64_t deficit_bytes = 0;
    bool credited = false;  // quantum already added in the current visit
    std::uint64_t bytes = 0;
    std::deque<SimFrame> queue;
    ElementCounters counters;
  };

  Flow* find(std::uint16_t vid);

  std::uint64_t per_flow_capacity_bytes_;
  std::vector<Flow> flows_;            // registration order
  std::deque<std::size_t> active_;     // round list of indices into flows_
  std::uint64_t unclassified_ = 0;
};

// Core-stateless fair queueing meter/dropper in front of a FIFO that drains
// at the inner link rate. Per-flow arrival rates are estimated with
// exponential averaging over inter-arrival gaps; frames are dropped with
// probability max(0, 1 - alpha/r_i); the fair share alpha is refreshed every
// averaging window from the estimated rates.
class CsfqQueue : public QueueElement {
 public:
  CsfqQueue(std::int64_t link_rate_bps, Tick averaging_window,
            std::uint64_t fifo_capacity_bytes, RngStream rng);

  bool offer(SimFrame frame, Tick now) override;
  std::optional<Tick> next_ready(Tick now) override;
  SimFrame take(Tick now) override;
  std::uint64_t queued_bytes() const override;
  void for_each_queued(
      const std::function<void(const SimFrame&)>& fn) const override;

  // Window timer hook; the network schedules this every averaging window.
  void on_window(Tick now);
  Tick window() const { return window_; }

  double fair_share_bps() const { return fair_share_bps_; }
  bool congested() const { return congested_; }
  double rate_estimate(std::uint16_t vid) const;
  std::vector<std::pair<std::uint16_t, ElementCounters>> flow_counters() const;

  // Exposed for tests: exponential-average update given a gap of `gap` ns.
  static double update_rate_estimate(double old_rate_bps, std::int64_t bits,
                                     Tick gap, Tick window);

 private:
  struct FlowMeter {
    double rate_bps = 0;
    Tick last_arrival = 0;
    bool seen = false;
  };

  double decayed_rate(const FlowMeter& m, Tick now) const;
  void update_fair_share(Tick now);

  std::int64_t link_rate_bps_;
  Tick window_;
  std::uint64_t capacity_bytes_;
  RngStream rng_;

  std::map<std::uint16_t, FlowMeter> meters_;
  std::map<std::uint16_t, ElementCounters> flow_counters_;
  double fair_share_bps_;
  bool congested_ = false;
  std::uint64_t window_arrived_bits_ = 0;
  Tick window_start_ = 0;

  std::uint64_t bytes_ = 0;
  std::deque<SimFrame> fifo_;
};

// Solves sum_i min(r_i, alpha) = capacity for alpha by bisection on
// [0, max r_i]. Returns max r_i when the rates don't add up to capacity.
double csfq_fair_share(const std::vector<double>& rates_bps,
                       double capacity_bps);

// Exact interval check of the token-bucket envelope: for every pair of
// departure events i <= j, the bits departing in [t_i, t_j] must not exceed
// b + r*(t_j - t_i) + slack_bits. Runs in O(n) via a prefix transform that
// is equivalent to checking all pairs.
bool tbf_conformant(const std::vector<Departure>& trace,
                    std::int64_t rate_bps, std::int64_t bucket_bits,
                    std::int64_t slack_bits = kMaxWireFrameBytes * 8);

}  // namespace svsim

#endif  // SVSIM_TRAFFIC_CONTROL_HPP
