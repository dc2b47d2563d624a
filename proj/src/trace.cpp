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

#include "svsim/trace.hpp"

#include <array>
#include <stdexcept>

namespace svsim {

namespace {

void put_u32le(std::ofstream& out, std::uint32_t v) {
  std::array<char, 4> b{static_cast<char>(v & 0xFF),
                        static_cast<char>((v >> 8) & 0xFF),
                        static_cast<char>((v >> 16) & 0xFF),
                        static_cast<char>((v >> 24) & 0xFF)};
  out.write(b.data(), 4);
}

void put_u16le(std::ofstream& out, std::uint16_t v) {
  std::array<char, 2> b{static_cast<char>(v & 0xFF),
                        static_cast<char>((v >> 8) & 0xFF)};
  out.write(b.data(), 2);
}

}  // namespace

HexTraceWriter::HexTraceWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open trace file: " + path);
}

void HexTraceWriter::record(Tick time, const std::string& node, int port,
                            bool tx, std::span<const std::uint8_t> bytes) {
  out_ << time << ' ' << node << ' ' << port << ' ' << (tx ? "TX" : "RX")
       << ' ' << to_hex(bytes) << '\n';
}

PcapWriter::PcapWriter(const std::string& path)
    : out_(path, std::ios::binary) {
  if (!out_) throw std::runtime_error("cannot open pcap file: " + path);
  put_u32le(out_, 0xA1B2C3D4);  // magic, microsecond timestamps
  put_u16le(out_, 2);           // version major
  put_u16le(out_, 4);           // version minor
  put_u32le(out_, 0);           // thiszone
  put_u32le(out_, 0);           // sigfigs
  put_u32le(out_, 65535);       // snaplen
  put_u32le(out_, 1);           // linktype: Ethernet
}

void PcapWriter::record(Tick time, std::span<const std::uint8_t> bytes) {
  put_u32le(out_, static_cast<std::uint32_t>(time / kNsPerSec));
  put_u32le(out_, static_cast<std::uint32_t>((time % kNsPerSec) / 1000));
  put_u32le(out_, static_cast<std::uint32_t>(bytes.size()));
  put_u32le(out_, static_cast<std::uint32_t>(bytes.size()));
  out_.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
}

}  // namespace svsim
