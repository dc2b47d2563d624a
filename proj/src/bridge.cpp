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

#include "svsim/bridge.hpp"

namespace svsim {

TagOpStatus apply_ingress(const PortRole& role, EthernetFrame& frame) {
  switch (role.kind) {
    case PortKind::kAccess:
      frame.push_tag(role.vid);
      return TagOpStatus::kOk;
    case PortKind::kStrunk:
      if (frame.tags.empty()) return TagOpStatus::kFormatError;
      frame.push_tag(role.vid);
      return TagOpStatus::kOk;
    case PortKind::kTrunk:
      return TagOpStatus::kOk;
  }
  return TagOpStatus::kFormatError;
}

TagOpStatus apply_egress(const PortRole& role, EthernetFrame& frame) {
  switch (role.kind) {
    case PortKind::kAccess:
      // The single remaining C-TAG comes off; hosts speak untagged.
      if (frame.tags.size() != 1 || frame.tags.front().tpid != kTpidCtag ||
          frame.tags.front().vid != role.vid)
        return TagOpStatus::kFormatError;
      frame.pop_tag();
      return TagOpStatus::kOk;
    case PortKind::kStrunk:
      if (frame.tags.size() < 2 || frame.tags.front().tpid != kTpidStag ||
          frame.tags.front().vid != role.vid)
        return TagOpStatus::kFormatError;
      frame.pop_tag();
      return TagOpStatus::kOk;
    case PortKind::kTrunk:
      return TagOpStatus::kOk;
  }
  return TagOpStatus::kFormatError;
}

}  // namespace svsim
