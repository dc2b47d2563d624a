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

#ifndef SVSIM_SIM_TIME_HPP
#define SVSIM_SIM_TIME_HPP

#include <cstdint>

namespace svsim {

// Simulated time in integer nanoseconds. All scheduling arithmetic is done
// in integers so repeated runs are bit-identical.
using Tick = std::int64_t;

inline constexpr Tick kNsPerUs = 1000;
inline constexpr Tick kNsPerMs = 1000 * 1000;
inline constexpr Tick kNsPerSec = 1000 * 1000 * 1000;

// ceil(bits * 1e9 / rate_bps) without overflow; transmission times round up
// to the next nanosecond.
inline Tick tx_duration_ns(std::int64_t bits, std::int64_t rate_bps) {
  using I = __int128;
  I num = static_cast<I>(bits) * kNsPerSec;
  return static_cast<Tick>((num + rate_bps - 1) / rate_bps);
}

inline double ticks_to_seconds(Tick t) {
  return static_cast<double>(t) / static_cast<double>(kNsPerSec);
}

}  // namespace svsim

#endif  // SVSIM_SIM_TIME_HPP
