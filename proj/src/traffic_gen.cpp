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

#include "svsim/traffic_gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace svsim {

namespace {

Tick exp_duration(RngStream& rng, Tick mean_ns) {
  if (mean_ns <= 0) return 0;
  double d = rng.exponential(static_cast<double>(mean_ns));
  if (d > 9.0e18) d = 9.0e18;
  return static_cast<Tick>(d);
}

}  // namespace

void SourceSpec::validate() const {
  if (mean_rate_bps <= 0)
    throw std::invalid_argument("source rate must be > 0");
  if (frame_min < 64 || frame_max > 1522 || frame_min > frame_max)
    throw std::invalid_argument(
        "frame size must lie in [64, 1522] with min <= max");
  if (kind == SourceKind::kOnOff && (mean_on_ns <= 0 || mean_off_ns < 0))
    throw std::invalid_argument("on-off periods must be positive");
  if (stop_ns != 0 && stop_ns <= start_ns)
    throw std::invalid_argument("source stop must be after start");
}

ArrivalProcess::ArrivalProcess(SourceSpec spec, RngStream rng)
    : spec_(spec), rng_(rng), clock_(spec.start_ns) {
  spec_.validate();
  if (spec_.kind == SourceKind::kOnOff) {
    // Peak rate chosen so the long-run average meets the configured rate.
    double duty = static_cast<double>(spec_.mean_on_ns) /
                  static_cast<double>(spec_.mean_on_ns + spec_.mean_off_ns);
    peak_rate_bps_ =
        static_cast<std::int64_t>(static_cast<double>(spec_.mean_rate_bps) /
                                  duty);
    on_ = true;
    phase_end_ = clock_ + exp_duration(rng_, spec_.mean_on_ns);
  }
}

std::int32_t ArrivalProcess::draw_frame_bytes() {
  if (spec_.frame_min == spec_.frame_max) return spec_.frame_min;
  return static_cast<std::int32_t>(
      rng_.uniform_int(spec_.frame_min, spec_.frame_max));
}

Tick ArrivalProcess::peak_interval_ns(std::int32_t frame_bytes) const {
  return tx_duration_ns(static_cast<std::int64_t>(frame_bytes) * 8,
                        peak_rate_bps_);
}

std::optional<std::pair<Tick, std::int32_t>> ArrivalProcess::next() {
  const Tick stop = spec_.stop_ns == 0 ? std::numeric_limits<Tick>::max()
                                       : spec_.stop_ns;
  switch (spec_.kind) {
    case SourceKind::kCbr: {
      std::int32_t bytes = draw_frame_bytes();
      // Emission k happens once k frames' worth of bits fit the rate budget.
      Tick t = spec_.start_ns +
               static_cast<Tick>(cbr_bits_sent_ * kNsPerSec /
                                 spec_.mean_rate_bps);
      if (t >= stop) return std::nullopt;
      cbr_bits_sent_ += static_cast<std::int64_t>(bytes) * 8;
      return std::make_pair(t, bytes);
    }
    case SourceKind::kPoisson: {
      std::int32_t bytes = draw_frame_bytes();
      double mean_ns = static_cast<double>(bytes) * 8.0 * kNsPerSec /
                       static_cast<double>(spec_.mean_rate_bps);
      clock_ += static_cast<Tick>(rng_.exponential(mean_ns));
      if (clock_ >= stop) return std::nullopt;
      return std::make_pair(clock_, bytes);
    }
    case SourceKind::kOnOff: {
      // Each frame owes one peak-rate interval of on-time; the debt carries
      // across off gaps so short on periods don't inflate the rate.
      std::int32_t bytes = draw_frame_bytes();
      Tick need = peak_interval_ns(bytes);
      while (true) {
        Tick avail = phase_end_ - clock_;
        if (avail >= need) {
          clock_ += need;
          if (clock_ >= stop) return std::nullopt;
          return std::make_pair(clock_, bytes);
        }
        need -= avail;
        Tick off = exp_duration(rng_, spec_.mean_off_ns);
        clock_ = phase_end_ + off;
        phase_end_ = clock_ + exp_duration(rng_, spec_.mean_on_ns);
        if (clock_ >= stop) return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

}  // namespace svsim
