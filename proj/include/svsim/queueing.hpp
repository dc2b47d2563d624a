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

#ifndef SVSIM_QUEUEING_HPP
#define SVSIM_QUEUEING_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>

#include "svsim/frame.hpp"
#include "svsim/sim_time.hpp"

namespace svsim {

// A frame in flight through the simulator: the bit-exact Ethernet frame plus
// measurement metadata that never appears on the wire.
struct SimFrame {
  EthernetFrame frame;
  Tick injected = 0;            // source injection timestamp
  std::uint16_t subscriber = 0; // owning subscriber C-VID (0 = none)
  std::uint64_t id = 0;
  bool control = false;         // bookkeeping traffic, excluded from stats

  std::int64_t wire_bits() const { return frame.wire_bits(); }
  std::size_t wire_bytes() const { return frame.wire_bytes(); }
  std::size_t payload_bytes() const { return frame.payload.size(); }
};

struct ElementCounters {
  std::uint64_t offered_frames = 0, offered_bytes = 0;
  std::uint64_t accepted_frames = 0, accepted_bytes = 0;
  std::uint64_t departed_frames = 0, departed_bytes = 0;
  std::uint64_t dropped_frames = 0, dropped_bytes = 0;
};

// Egress traffic-control element of a port: anything from a plain tail-drop
// FIFO to a shaper bank. The owning port pulls frames one at a time.
class QueueElement {
 public:
  virtual ~QueueElement() = default;

  // Hands a frame to the element at `now`. Returns false when the element
  // dropped it (counted internally and reported through on_drop).
  virtual bool offer(SimFrame frame, Tick now) = 0;

  // Earliest time (>= now) a frame may be taken, or nullopt when nothing is
  // queued. Must not change element state observably.
  virtual std::optional<Tick> next_ready(Tick now) = 0;

  // Removes and returns the frame due at `now`; only valid when
  // next_ready(now) == now.
  virtual SimFrame take(Tick now) = 0;

  virtual std::uint64_t queued_bytes() const = 0;

  // Visits frames still queued (run-end residual accounting).
  virtual void for_each_queued(
      const std::function<void(const SimFrame&)>& fn) const = 0;

  const ElementCounters& counters() const { return counters_; }

  // Invoked for every dropped frame; wired to the metrics hub.
  std::function<void(const SimFrame&, Tick)> on_drop;

 protected:
  void count_offer(const SimFrame& f) {
    counters_.offered_frames++;
    counters_.offered_bytes += f.wire_bytes();
  }
  void count_accept(const SimFrame& f) {
    counters_.accepted_frames++;
    counters_.accepted_bytes += f.wire_bytes();
  }
  void count_depart(const SimFrame& f) {
    counters_.departed_frames++;
    counters_.departed_bytes += f.wire_bytes();
  }
  void count_drop(const SimFrame& f, Tick now) {
    counters_.dropped_frames++;
    counters_.dropped_bytes += f.wire_bytes();
    if (on_drop) on_drop(f, now);
  }

  ElementCounters counters_;
};

// Tail-drop FIFO with a byte capacity.
class FifoQueue : public QueueElement {
 public:
  explicit FifoQueue(std::uint64_t capacity_bytes)
      : capacity_bytes_(capacity_bytes) {}

  bool offer(SimFrame frame, Tick now) override {
    count_offer(frame);
    if (bytes_ + frame.wire_bytes() > capacity_bytes_) {
      count_drop(frame, now);
      return false;
    }
    bytes_ += frame.wire_bytes();
    count_accept(frame);
    queue_.push_back(std::move(frame));
    return true;
  }

  std::optional<Tick> next_ready(Tick now) override {
    if (queue_.empty()) return std::nullopt;
    return now;
  }

  SimFrame take(Tick) override {
    SimFrame f = std::move(queue_.front());
    queue_.pop_front();
    bytes_ -= f.wire_bytes();
    count_depart(f);
    return f;
  }

  std::uint64_t queued_bytes() const override { return bytes_; }
  std::size_t queued_frames() const { return queue_.size(); }

  void for_each_queued(
      const std::function<void(const SimFrame&)>& fn) const override {
    for (const auto& f : queue_) fn(f);
  }

 private:
  std::uint64_t capacity_bytes_;
  std::uint64_t bytes_ = 0;
  std::deque<SimFrame> queue_;
};

}  // namespace svsim

#endif  // SVSIM_QUEUEING_HPP
