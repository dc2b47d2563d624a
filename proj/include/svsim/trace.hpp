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

#ifndef SVSIM_TRACE_HPP
#define SVSIM_TRACE_HPP

#include <cstdint>
#include <fstream>
#include <span>
#include <string>

#include "svsim/frame.hpp"
#include "svsim/sim_time.hpp"

namespace svsim {

// One frame per line: <time_ns> <node> <port> <RX|TX> <uppercase hex>.
class HexTraceWriter {
 public:
  explicit HexTraceWriter(const std::string& path);

  void record(Tick time, const std::string& node, int port, bool tx,
              std::span<const std::uint8_t> bytes);

 private:
  std::ofstream out_;
};

// Classic pcap, linktype Ethernet (1), microsecond timestamps.
class PcapWriter {
 public:
  explicit PcapWriter(const std::string& path);

  void record(Tick time, std::span<const std::uint8_t> bytes);

 private:
  std::ofstream out_;
};

}  // namespace svsim

#endif  // SVSIM_TRACE_HPP
