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
// VLAN-aware learning bridge pieces: port roles with their tag operations,
// and the forwarding database keyed on (outermost VID, MAC) with aging. The
// relay deliberately sees only the outermost tag, which is what confines
// broadcasts to one level of the VLAN hierarchy.

#ifndef SVSIM_BRIDGE_HPP
#define SVSIM_BRIDGE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "svsim/frame.hpp"
#include "svsim/sim_time.hpp"

namespace svsim {

enum class PortKind : std::uint8_t {
  kAccess,  // pushes/pops a C-TAG; host side, untagged on the wire
  kStrunk,  // pushes/pops an S-TAG over an already-tagged frame
  kTrunk,   // passes tags through
};

struct PortRole {
  PortKind kind = PortKind::kTrunk;
  std::uint16_t vid = 0;            // access: C-VID; strunk: S-VID
  std::set<std::uint16_t> members;  // strunk: inner C-VIDs (bookkeeping);
                                    // trunk: allowed VIDs (empty = all)

  static PortRole access(std::uint16_t cvid) {
    return PortRole{PortKind::kAccess, cvid, {}};
  }
  static PortRole strunk(std::uint16_t svid, std::set<std::uint16_t> inner) {
    return PortRole{PortKind::kStrunk, svid, std::move(inner)};
  }
  static PortRole trunk(std::set<std::uint16_t> allowed = {}) {
    return PortRole{PortKind::kTrunk, 0, std::move(allowed)};
  }

  // Flood/forward membership against a frame's outermost VID.
  bool is_member(std::uint16_t outer_vid) const {
    switch (kind) {
      case PortKind::kAccess:
      case PortKind::kStrunk:
        return outer_vid == vid;
      case PortKind::kTrunk:
        return members.empty() || members.count(outer_vid) > 0;
    }
    return false;
  }
};

// Result of an ingress/egress tag operation.
enum class TagOpStatus : std::uint8_t { kOk, kFormatError };

// Applies the port's ingress operation (frame arriving from the wire).
// Access pushes the C-TAG, strunk pushes the S-TAG over an existing stack,
// trunk passes through. Strunk ingress of an untagged frame is an error.
TagOpStatus apply_ingress(const PortRole& role, EthernetFrame& frame);

// Applies the port's egress operation (frame leaving onto the wire).
// Access pops the C-TAG, strunk pops the S-TAG, trunk passes through.
// Popping below the expected depth or a mismatched tag is an error.
TagOpStatus apply_egress(const PortRole& role, EthernetFrame& frame);

struct FdbRow {
  std::uint16_t vid;
  MacAddress mac;
  int port;
  Tick age_ns;
};

// (outermost VID, MAC) -> (port, last seen). Entries expire after the aging
// time; expiry is checked lazily on lookup and swept on dump.
class ForwardingDatabase {
 public:
  explicit ForwardingDatabase(Tick aging_ns = 300 * kNsPerSec)
      : aging_ns_(aging_ns) {}

  void learn(std::uint16_t vid, const MacAddress& mac, int port, Tick now) {
    entries_[Key{vid, mac}] = Entry{port, now};
  }

  std::optional<int> lookup(std::uint16_t vid, const MacAddress& mac,
                            Tick now) const {
    auto it = entries_.find(Key{vid, mac});
    if (it == entries_.end()) return std::nullopt;
    if (now - it->second.last_seen > aging_ns_) return std::nullopt;
    return it->second.port;
  }

  void purge_expired(Tick now) {
    for (auto it = entries_.begin(); it != entries_.end();) {
      if (now - it->second.last_seen > aging_ns_)
        it = entries_.erase(it);
      else
        ++it;
    }
  }

  std::vector<FdbRow> dump(Tick now) {
    purge_expired(now);
    std::vector<FdbRow> rows;
    rows.reserve(entries_.size());
    for (const auto& [key, entry] : entries_)
      rows.push_back({key.vid, key.mac, entry.port, now - entry.last_seen});
    return rows;
  }

  std::size_t size() const { return entries_.size(); }
  Tick aging_ns() const { return aging_ns_; }

 private:
  struct Key {
    std::uint16_t vid;
    MacAddress mac;
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  struct Entry {
    int port;
    Tick last_seen;
  };

  Tick aging_ns_;
  std::map<Key, Entry> entries_;
};

}  // namespace svsim

#endif  // SVSIM_BRIDGE_HPP
