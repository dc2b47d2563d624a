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
// Nodes, ports, links and the transmission engine. Every port owns exactly
// one egress traffic-control element; the port pulls from it whenever its
// transmitter is free, serializes the frame onto the link and delivers it to
// the peer after the propagation delay.

#ifndef SVSIM_NETWORK_HPP
#define SVSIM_NETWORK_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "svsim/bridge.hpp"
#include "svsim/event_loop.hpp"
#include "svsim/queueing.hpp"

namespace svsim {

struct LinkParams {
  std::int64_t rate_bps = 0;
  Tick delay_ns = 0;
};

struct PortStats {
  std::uint64_t rx_frames = 0, tx_frames = 0;
  std::uint64_t ingress_errors = 0;  // tag-format violations on ingress
  std::uint64_t egress_errors = 0;   // tag pops below the expected depth
};

class Network;

class Node {
 public:
  struct Port {
    PortRole role;
    std::unique_ptr<QueueElement> egress;
    LinkParams link;
    int peer_node = -1;
    int peer_port = -1;
    bool tx_busy = false;
    Tick pending_kick = -1;
    PortStats stats;
  };

  Node(Network& net, int id, std::string name)
      : net_(net), id_(id), name_(std::move(name)) {}
  virtual ~Node() = default;

  int add_port(PortRole role, std::unique_ptr<QueueElement> egress);

  // Frame arriving from the wire on `port` at `now`.
  virtual void receive(int port, SimFrame frame, Tick now) = 0;

  int id() const { return id_; }
  const std::string& name() const { return name_; }
  Port& port(int i) { return ports_[static_cast<std::size_t>(i)]; }
  const Port& port(int i) const { return ports_[static_cast<std::size_t>(i)]; }
  int port_count() const { return static_cast<int>(ports_.size()); }

 protected:
  Network& net_;
  int id_;
  std::string name_;
  std::vector<Port> ports_;
};

// VLAN-aware learning bridge node.
class SwitchNode : public Node {
 public:
  SwitchNode(Network& net, int id, std::string name,
             Tick fdb_aging_ns = 300 * kNsPerSec)
      : Node(net, id, std::move(name)), fdb_(fdb_aging_ns) {}

  void receive(int port, SimFrame frame, Tick now) override;

  ForwardingDatabase& fdb() { return fdb_; }

 private:
  ForwardingDatabase fdb_;
};

// End host: emits untagged frames, accepts frames addressed to it.
class HostNode : public Node {
 public:
  HostNode(Network& net, int id, std::string name, MacAddress mac,
           std::uint16_t subscriber)
      : Node(net, id, std::move(name)), mac_(mac), subscriber_(subscriber) {}

  void receive(int port, SimFrame frame, Tick now) override;

  // Queues a frame for transmission on the host's single port.
  void send(SimFrame frame, Tick now);

  const MacAddress& mac() const { return mac_; }
  std::uint16_t subscriber() const { return subscriber_; }
  std::uint64_t stray_frames() const { return stray_frames_; }

  // Delivery callback (frames addressed to this host or broadcast).
  std::function<void(const SimFrame&, Tick)> on_deliver;

 private:
  MacAddress mac_;
  std::uint16_t subscriber_;
  std::uint64_t stray_frames_ = 0;
};

// Owns the nodes and the event loop wiring between them.
class Network {
 public:
  explicit Network(EventLoop& loop) : loop_(loop) {}

  SwitchNode* add_switch(const std::string& name,
                         Tick fdb_aging_ns = 300 * kNsPerSec);
  HostNode* add_host(const std::string& name, MacAddress mac,
                     std::uint16_t subscriber);

  // Connects two ports with a full-duplex link.
  void connect(Node* a, int port_a, Node* b, int port_b, LinkParams link);

  // Applies the egress tag operation, hands the frame to the port's element
  // and kicks the transmitter.
  void transmit(Node* node, int port, SimFrame frame, Tick now);

  // Re-evaluates the port after element state changed (new frame, timer).
  void kick(Node* node, int port, Tick now);

  EventLoop& loop() { return loop_; }
  Node* node(int id) { return nodes_[static_cast<std::size_t>(id)].get(); }
  const std::vector<std::unique_ptr<Node>>& nodes() const { return nodes_; }

  // Observers for traces and tests. TX fires at transmission start with the
  // on-wire frame; RX fires at delivery.
  std::function<void(Tick, const Node&, int, const SimFrame&)> on_tx;
  std::function<void(Tick, const Node&, int, const SimFrame&)> on_rx;

 private:
  void start_tx(Node* node, int port, Tick now);

  EventLoop& loop_;
  std::vector<std::unique_ptr<Node>> nodes_;
};

}  // namespace svsim

#endif  // SVSIM_NETWORK_HPP
