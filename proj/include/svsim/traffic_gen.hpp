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
// Open-loop traffic sources: constant bit rate, Poisson, and exponential
// on-off (CBR at peak rate during on periods, tuned so the long-run mean
// equals the configured rate).

#ifndef SVSIM_TRAFFIC_GEN_HPP
#define SVSIM_TRAFFIC_GEN_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "svsim/rng.hpp"
#include "svsim/sim_time.hpp"

namespace svsim {

enum class SourceKind : std::uint8_t { kCbr, kPoisson, kOnOff };

struct SourceSpec {
  SourceKind kind = SourceKind::kCbr;
  std::int64_t mean_rate_bps = 0;
  // Untagged frame size in bytes including header and FCS; a fixed size has
  // frame_min == frame_max, otherwise sizes draw uniformly from the range.
  std::int32_t frame_min = 0;
  std::int32_t frame_max = 0;
  Tick mean_on_ns = kNsPerSec;   // on-off only
  Tick mean_off_ns = kNsPerSec;  // on-off only
  std::uint16_t subscriber = 0;  // destination subscriber
  Tick start_ns = 0;
  Tick stop_ns = 0;  // exclusive; 0 = run forever

  void validate() const;
};

// Arrival process only; frame construction and injection live with the
// topology. Draws are deterministic per (seed, stream).
class ArrivalProcess {
 public:
  ArrivalProcess(SourceSpec spec, RngStream rng);

  // Next frame at or after the current position: (emission time, frame
  // bytes), or nullopt once the stop time has passed.
  std::optional<std::pair<Tick, std::int32_t>> next();

 private:
  std::int32_t draw_frame_bytes();
  Tick peak_interval_ns(std::int32_t frame_bytes) const;

  SourceSpec spec_;
  RngStream rng_;
  Tick clock_;
  // CBR runs on an exact bit budget so interval rounding never drifts.
  __int128 cbr_bits_sent_ = 0;
  bool on_ = false;
  Tick phase_end_ = 0;  // on-off: end of the current on/off period
  std::int64_t peak_rate_bps_ = 0;
};

}  // namespace svsim

#endif  // SVSIM_TRAFFIC_GEN_HPP
