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
// Deterministic discrete-event core. Events run in (time, seq) order where
// seq is assigned at schedule time, so ties replay identically.

#ifndef SVSIM_EVENT_LOOP_HPP
#define SVSIM_EVENT_LOOP_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "svsim/sim_time.hpp"

namespace svsim {

enum class EventKind : std::uint8_t { kArrival, kDeparture, kTimer };

class EventLoop {
 public:
  using Action = std::function<void(Tick)>;

  Tick now() const { return now_; }

  // Schedules an event; scheduling in the past is a fatal ordering bug.
  void at(Tick time, Action action, EventKind kind = EventKind::kTimer) {
    if (time < now_)
      throw std::logic_error("event scheduled in the past: t=" +
                             std::to_string(time) + " now=" +
                             std::to_string(now_));
    queue_.push(Event{time, seq_++, kind, std::move(action)});
  }

  void after(Tick delay, Action action, EventKind kind = EventKind::kTimer) {
    at(now_ + delay, std::move(action), kind);
  }

  // Executes events in order until the queue empties or the next event lies
  // beyond `until`. Returns the final clock; later events stay queued. When
  // stopped by the horizon the clock advances to `until`; when the queue
  // drains it stays at the last executed event.
  Tick run_until(Tick until) {
    while (!queue_.empty() && queue_.top().time <= until) {
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      ev.action(ev.time);
    }
    if (!queue_.empty() && until > now_) now_ = until;
    return now_;
  }

  bool empty() const { return queue_.empty(); }
  std::size_t pending() const { return queue_.size(); }

 private:
  struct Event {
    Tick time;
    std::uint64_t seq;
    EventKind kind;
    Action action;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  Tick now_ = 0;
  std::uint64_t seq_ = 0;
};

}  // namespace svsim

#endif  // SVSIM_EVENT_LOOP_HPP
