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

#include "svsim/frame.hpp"

#include <cstdio>

namespace svsim {

namespace {

struct Crc32Table {
  std::array<std::uint32_t, 256> t{};
  constexpr Crc32Table() {
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k)
        c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
  }
};
constexpr Crc32Table kCrcTable;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

std::uint16_t get_u16(std::span<const std::uint8_t> in, std::size_t off) {
  return static_cast<std::uint16_t>((in[off] << 8) | in[off + 1]);
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> data) {
  std::uint32_t c = 0xFFFFFFFFu;
  for (std::uint8_t b : data) c = kCrcTable.t[(c ^ b) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

MacAddress MacAddress::parse(const std::string& text) {
  MacAddress m;
  unsigned v[6];
  if (std::sscanf(text.c_str(), "%x:%x:%x:%x:%x:%x", &v[0], &v[1], &v[2],
                  &v[3], &v[4], &v[5]) != 6)
    throw std::invalid_argument("bad MAC address: " + text);
  for (int i = 0; i < 6; ++i) {
    if (v[i] > 0xFF) throw std::invalid_argument("bad MAC address: " + text);
    m.octets[i] = static_cast<std::uint8_t>(v[i]);
  }
  return m;
}

std::string MacAddress::to_string() const {
  char buf[18];
  std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x", octets[0],
                octets[1], octets[2], octets[3], octets[4], octets[5]);
  return buf;
}

void EthernetFrame::push_tag(std::uint16_t vid, std::uint8_t pcp, bool dei) {
  if (vid > kMaxVid)
    throw FrameError(FrameError::Kind::kBadVid,
                     "vid " + std::to_string(vid) + " out of range");
  VlanTag tag{tags.empty() ? kTpidCtag : kTpidStag, pcp, dei, vid};
  tags.insert(tags.begin(), tag);
}

VlanTag EthernetFrame::pop_tag() {
  if (tags.empty())
    throw FrameError(FrameError::Kind::kNoTags, "pop_tag on untagged frame");
  VlanTag t = tags.front();
  tags.erase(tags.begin());
  return t;
}

bool EthernetFrame::tag_stack_valid() const {
  for (std::size_t i = 0; i < tags.size(); ++i) {
    bool innermost = (i + 1 == tags.size());
    std::uint16_t want = innermost ? kTpidCtag : kTpidStag;
    if (tags[i].tpid != want) return false;
    if (tags[i].vid > kMaxVid) return false;
  }
  return true;
}

std::vector<std::uint8_t> EthernetFrame::serialize(bool pad_to_min) const {
  if (!tag_stack_valid())
    throw FrameError(FrameError::Kind::kBadTagStack,
                     "tag stack violates TPID discipline");
  std::vector<std::uint8_t> out;
  out.reserve(wire_bytes());
  out.insert(out.end(), dst.octets.begin(), dst.octets.end());
  out.insert(out.end(), src.octets.begin(), src.octets.end());
  for (const VlanTag& t : tags) {
    put_u16(out, t.tpid);
    put_u16(out, t.tci());
  }
  put_u16(out, ethertype);
  out.insert(out.end(), payload.begin(), payload.end());
  if (pad_to_min) {
    while (out.size() + kFcsBytes < kMinEthernetFrameBytes) out.push_back(0);
  }
  std::uint32_t fcs = crc32(out);
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>((fcs >> (8 * i)) & 0xFF));
  return out;
}

EthernetFrame EthernetFrame::parse(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMinWireBytes)
    throw FrameError(FrameError::Kind::kTruncated,
                     "frame shorter than " + std::to_string(kMinWireBytes) +
                         " bytes");
  std::uint32_t want = crc32(bytes.first(bytes.size() - kFcsBytes));
  std::uint32_t got = 0;
  for (int i = 0; i < 4; ++i)
    got |= static_cast<std::uint32_t>(bytes[bytes.size() - 4 + i]) << (8 * i);
  if (want != got)
    throw FrameError(FrameError::Kind::kBadChecksum, "FCS mismatch");

  EthernetFrame f;
  std::copy_n(bytes.begin(), 6, f.dst.octets.begin());
  std::copy_n(bytes.begin() + 6, 6, f.src.octets.begin());
  std::size_t off = 12;
  while (true) {
    if (off + 2 + kFcsBytes > bytes.size())
      throw FrameError(FrameError::Kind::kTruncated, "frame ends inside tags");
    std::uint16_t code = get_u16(bytes, off);
    if (code != kTpidCtag && code != kTpidStag) break;
    if (off + 4 + 2 + kFcsBytes > bytes.size())
      throw FrameError(FrameError::Kind::kTruncated, "frame ends inside tags");
    f.tags.push_back(VlanTag::from_tci(code, get_u16(bytes, off + 2)));
    off += kVlanTagBytes;
  }
  f.ethertype = get_u16(bytes, off);
  off += 2;
  f.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(off),
                   bytes.end() - kFcsBytes);
  if (!f.tag_stack_valid())
    throw FrameError(FrameError::Kind::kBadTagStack,
                     "tag stack violates TPID discipline");
  return f;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static const char* digits = "0123456789ABCDEF";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xF]);
  }
  return s;
}

}  // namespace svsim
