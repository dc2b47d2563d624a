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
// Bit-exact model of Ethernet II frames carrying a stack of VLAN tags
// (IEEE 802.1Q / 802.1ad provider bridging). The stack is ordered
// outermost-first and may be arbitrarily deep: a single tag is a C-TAG
// (TPID 0x8100); with two or more tags every outer layer is an S-TAG
// (TPID 0x88A8) and only the innermost is a C-TAG.

#ifndef SVSIM_FRAME_HPP
#define SVSIM_FRAME_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace svsim {

inline constexpr std::uint16_t kTpidCtag = 0x8100;
inline constexpr std::uint16_t kTpidStag = 0x88A8;
inline constexpr std::uint16_t kMaxVid = 4094;  // 4095 is reserved

// dst(6) + src(6) + ethertype(2)
inline constexpr std::size_t kEthHeaderBytes = 14;
inline constexpr std::size_t kVlanTagBytes = 4;
inline constexpr std::size_t kFcsBytes = 4;
inline constexpr std::size_t kMinWireBytes = kEthHeaderBytes + kFcsBytes;
inline constexpr std::size_t kMinEthernetFrameBytes = 64;

struct MacAddress {
  std::array<std::uint8_t, 6> octets{};

  static MacAddress broadcast() {
    return MacAddress{{0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF}};
  }
  // Parses "aa:bb:cc:dd:ee:ff"; throws std::invalid_argument on bad input.
  static MacAddress parse(const std::string& text);

  bool is_broadcast() const {
    for (auto b : octets)
      if (b != 0xFF) return false;
    return true;
  }
  // Group bit: lowest bit of the first octet.
  bool is_multicast() const { return (octets[0] & 0x01) != 0; }

  std::string to_string() const;

  friend bool operator==(const MacAddress&, const MacAddress&) = default;
  friend auto operator<=>(const MacAddress&, const MacAddress&) = default;
};

struct VlanTag {
  std::uint16_t tpid = kTpidCtag;
  std::uint8_t pcp = 0;  // 3 bits
  bool dei = false;
  std::uint16_t vid = 0;  // 12 bits, [0, 4094]

  std::uint16_t tci() const {
    return static_cast<std::uint16_t>((pcp & 0x7) << 13) |
           static_cast<std::uint16_t>(dei ? 1u << 12 : 0u) | (vid & 0x0FFF);
  }
  static VlanTag from_tci(std::uint16_t tpid, std::uint16_t tci) {
    return VlanTag{tpid, static_cast<std::uint8_t>((tci >> 13) & 0x7),
                   ((tci >> 12) & 0x1) != 0,
                   static_cast<std::uint16_t>(tci & 0x0FFF)};
  }

  friend bool operator==(const VlanTag&, const VlanTag&) = default;
};

class FrameError : public std::runtime_error {
 public:
  enum class Kind {
    kBadVid,       // vid outside [0, 4094]
    kNoTags,       // pop/inspect on an untagged frame
    kTruncated,    // parse input shorter than a minimal frame
    kBadChecksum,  // FCS mismatch
    kBadTagStack,  // TPID discipline violated
  };

  FrameError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// IEEE 802.3 CRC-32 (reflected, poly 0xEDB88320, init/final 0xFFFFFFFF).
std::uint32_t crc32(std::span<const std::uint8_t> data);

struct EthernetFrame {
  MacAddress dst;
  MacAddress src;
  std::vector<VlanTag> tags;  // outermost first; may be empty
  std::uint16_t ethertype = 0x0800;
  std::vector<std::uint8_t> payload;

  // Prepends a new outermost tag. The new tag is an S-TAG when the frame is
  // already tagged, a C-TAG otherwise, so the TPID discipline holds by
  // construction. Throws FrameError(kBadVid) for vid > 4094.
  void push_tag(std::uint16_t vid, std::uint8_t pcp = 0, bool dei = false);

  // Removes and returns the outermost tag. Throws FrameError(kNoTags) on an
  // untagged frame.
  VlanTag pop_tag();

  // VID of the outermost tag, or nullopt when untagged. Inner tags are not
  // visible here; legacy lookup paths stay on the outer tag only.
  std::optional<std::uint16_t> outer_vid() const {
    if (tags.empty()) return std::nullopt;
    return tags.front().vid;
  }

  // On-wire length including the FCS.
  std::size_t wire_bytes() const {
    return kEthHeaderBytes + kVlanTagBytes * tags.size() + payload.size() +
           kFcsBytes;
  }
  std::int64_t wire_bits() const {
    return static_cast<std::int64_t>(wire_bytes()) * 8;
  }

  bool tag_stack_valid() const;

  // Network-order layout: dst, src, (tpid, tci) per tag outermost first,
  // ethertype, payload, CRC-32 FCS. The FCS is appended in IEEE 802.3 wire
  // order (least significant byte first) so external capture tools validate
  // the traces. With pad_to_min set, payloads are zero-extended until the
  // frame reaches the 64-byte Ethernet minimum.
  std::vector<std::uint8_t> serialize(bool pad_to_min = false) const;

  // Inverse of serialize. Consumes tags while the next TPID is 0x8100 or
  // 0x88A8, verifies the FCS and the TPID discipline. Throws FrameError.
  static EthernetFrame parse(std::span<const std::uint8_t> bytes);

  friend bool operator==(const EthernetFrame&, const EthernetFrame&) = default;
};

std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace svsim

#endif  // SVSIM_FRAME_HPP
