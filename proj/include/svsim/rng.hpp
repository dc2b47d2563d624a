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

#ifndef SVSIM_RNG_HPP
#define SVSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace svsim {

// SplitMix64 step; used to derive independent per-element seeds from the
// master seed so adding one element never perturbs another's draws.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// FNV-1a over a label; stream ids are derived from stable element names.
inline std::uint64_t stream_id(std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : label) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

// Deterministic per-element random stream. Same (seed, stream) pair yields
// the identical draw sequence; distributions are hand-rolled on top of the
// raw engine so results do not depend on library internals.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream)
      : engine_(derive(master_seed, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Exponential with the given mean (> 0).
  double exponential(double mean) {
    return -mean * std::log1p(-uniform01());
  }

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    // Rejection-free modulo is fine here; span is tiny next to 2^64.
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ (stream * 0x9E3779B97F4A7C15ull);
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
  }

  std::mt19937_64 engine_;
};

}  // namespace svsim

#endif  // SVSIM_RNG_HPP
