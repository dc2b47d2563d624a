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

#include "svsim/network.hpp"

#include <cassert>
#include <stdexcept>

namespace svsim {

int Node::add_port(PortRole role, std::unique_ptr<QueueElement> egress) {
  Port p;
  p.role = role;
  p.egress = std::move(egress);
  ports_.push_back(std::move(p));
  return static_cast<int>(ports_.size()) - 1;
}

void SwitchNode::receive(int in_port, SimFrame frame, Tick now) {
  Port& in = port(in_port);
  in.stats.rx_frames++;

  if (apply_ingress(in.role, frame.frame) != TagOpStatus::kOk) {
    in.stats.ingress_errors++;
    return;
  }
  auto vid = frame.frame.outer_vid();
  if (!vid) {
    // Untagged frame on a trunk: nothing to key the relay on.
    in.stats.ingress_errors++;
    return;
  }

  fdb_.learn(*vid, frame.frame.src, in_port, now);

  std::vector<int> out_ports;
  bool flood = frame.frame.dst.is_multicast();
  if (!flood) {
    auto hit = fdb_.lookup(*vid, frame.frame.dst, now);
    if (hit) {
      if (*hit != in_port) out_ports.push_back(*hit);
    } else {
      flood = true;
    }
  }
  if (flood) {
    for (int p = 0; p < port_count(); ++p) {
      if (p == in_port) continue;
      if (port(p).peer_node < 0) continue;
      if (port(p).role.is_member(*vid)) out_ports.push_back(p);
    }
  }

  for (std::size_t i = 0; i < out_ports.size(); ++i) {
    if (i + 1 == out_ports.size())
      net_.transmit(this, out_ports[i], std::move(frame), now);
    else
      net_.transmit(this, out_ports[i], frame, now);
  }
}

void HostNode::receive(int in_port, SimFrame frame, Tick now) {
  port(in_port).stats.rx_frames++;
  if (frame.frame.dst == mac_ || frame.frame.dst.is_broadcast()) {
    if (on_deliver) on_deliver(frame, now);
  } else {
    // Flooded unicast meant for another station; a NIC just ignores it.
    stray_frames_++;
  }
}

void HostNode::send(SimFrame frame, Tick now) {
  net_.transmit(this, 0, std::move(frame), now);
}

SwitchNode* Network::add_switch(const std::string& name, Tick fdb_aging_ns) {
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(
      std::make_unique<SwitchNode>(*this, id, name, fdb_aging_ns));
  return static_cast<SwitchNode*>(nodes_.back().get());
}

HostNode* Network::add_host(const std::string& name, MacAddress mac,
                            std::uint16_t subscriber) {
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(
      std::make_unique<HostNode>(*this, id, name, mac, subscriber));
  return static_cast<HostNode*>(nodes_.back().get());
}

void Network::connect(Node* a, int port_a, Node* b, int port_b,
                      LinkParams link) {
  if (link.rate_bps <= 0) throw std::invalid_argument("link rate must be > 0");
  if (link.delay_ns < 0) throw std::invalid_argument("negative link delay");
  Node::Port& pa = a->port(port_a);
  Node::Port& pb = b->port(port_b);
  if (pa.peer_node >= 0 || pb.peer_node >= 0)
    throw std::invalid_argument("port already connected");
  pa.link = link;
  pb.link = link;
  pa.peer_node = b->id();
  pa.peer_port = port_b;
  pb.peer_node = a->id();
  pb.peer_port = port_a;
}

void Network::transmit(Node* node, int port, SimFrame frame, Tick now) {
  Node::Port& p = node->port(port);
  if (p.peer_node < 0) return;  // unconnected port: frame evaporates
  if (apply_egress(p.role, frame.frame) != TagOpStatus::kOk) {
    p.stats.egress_errors++;
    return;
  }
  p.egress->offer(std::move(frame), now);
  kick(node, port, now);
}

void Network::kick(Node* node, int port, Tick now) {
  Node::Port& p = node->port(port);
  if (p.tx_busy) return;
  auto ready = p.egress->next_ready(now);
  if (!ready) return;
  if (*ready <= now) {
    start_tx(node, port, now);
    return;
  }
  // Wake up when the element says the head becomes eligible. A stale wakeup
  // (element re-armed earlier meanwhile) is detected via pending_kick.
  if (p.pending_kick >= 0 && p.pending_kick <= *ready) return;
  p.pending_kick = *ready;
  Tick expected = *ready;
  loop_.at(expected, [this, node, port, expected](Tick t) {
    Node::Port& pp = node->port(port);
    if (pp.pending_kick != expected) return;
    pp.pending_kick = -1;
    kick(node, port, t);
  });
}

void Network::start_tx(Node* node, int port, Tick now) {
  Node::Port& p = node->port(port);
  assert(!p.tx_busy);
  SimFrame frame = p.egress->take(now);
  p.stats.tx_frames++;
  if (on_tx) on_tx(now, *node, port, frame);

  Tick ser = tx_duration_ns(frame.wire_bits(), p.link.rate_bps);
  p.tx_busy = true;
  loop_.at(
      now + ser,
      [this, node, port](Tick t) {
        node->port(port).tx_busy = false;
        kick(node, port, t);
      },
      EventKind::kDeparture);

  Node* peer = this->node(p.peer_node);
  int peer_port = p.peer_port;
  Tick arrive = now + ser + p.link.delay_ns;
  loop_.at(
      arrive,
      [this, peer, peer_port, f = std::move(frame)](Tick t) mutable {
        if (on_rx) on_rx(t, *peer, peer_port, f);
        peer->receive(peer_port, std::move(f), t);
      },
      EventKind::kArrival);
}

}  // namespace svsim
