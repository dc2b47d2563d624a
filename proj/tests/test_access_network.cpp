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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "svsim/access_network.hpp"
#include "svsim/report.hpp"

using namespace svsim;

namespace {

std::string subscriber_block(std::uint16_t vid, const char* plan,
                             const char* rate) {
  std::ostringstream s;
  s << "subscribers." << vid << ".plan = " << plan << "\n";
  s << "subscribers." << vid << ".token_rate = " << rate << "\n";
  s << "subscribers." << vid << ".bucket_size = 1Mb\n";
  return s.str();
}

std::string source_block(int n, std::uint16_t vid, const char* rate,
                         const char* kind = "cbr") {
  std::ostringstream s;
  s << "sources." << n << ".kind = " << kind << "\n";
  s << "sources." << n << ".subscriber = " << vid << "\n";
  s << "sources." << n << ".rate = " << rate << "\n";
  s << "sources." << n << ".frame_size = 1268\n";
  return s.str();
}

ScenarioConfig mixed_config(const char* inner_rate = "20Mbps") {
  std::ostringstream s;
  s << "topology.inner_link_rate = " << inner_rate << "\n";
  s << subscriber_block(10, "shared", "10Mbps");
  s << subscriber_block(11, "shared", "10Mbps");
  s << subscriber_block(20, "legacy", "10Mbps");
  s << "group.svid = 100\n";
  s << "group.scheduler = drr\n";
  s << source_block(0, 10, "30Mbps");
  s << source_block(1, 11, "30Mbps");
  s << source_block(2, 20, "5Mbps");
  s << "run.duration = 2s\n";
  s << "run.seed = 3\n";
  return ScenarioConfig::parse(s.str());
}

}  // namespace

TEST_CASE("two legacy plus four shared subscribers yield three uplink TBFs") {
  std::ostringstream s;
  s << subscriber_block(10, "shared", "10Mbps")
    << subscriber_block(11, "shared", "10Mbps")
    << subscriber_block(12, "shared", "20Mbps")
    << subscriber_block(13, "shared", "40Mbps")
    << subscriber_block(20, "legacy", "10Mbps")
    << subscriber_block(21, "legacy", "10Mbps");
  s << "group.svid = 100\ngroup.scheduler = drr\n";
  s << "topology.inner_link_rate = 80Mbps\n";
  s << "run.duration = 1s\n";
  AccessNetwork an(ScenarioConfig::parse(s.str()));
  REQUIRE(an.uplink_bank() != nullptr);
  CHECK(an.uplink_bank()->vids().size() == 3);  // 2 legacy + 1 group
  CHECK(an.uplink_bank()->shaper(20) != nullptr);
  CHECK(an.uplink_bank()->shaper(21) != nullptr);
  CHECK(an.uplink_bank()->shaper(100) != nullptr);
  // Group bucket defaults to the sum of the member token rates.
  CHECK(an.uplink_bank()->shaper(100)->bucket().params().rate_bps ==
        80'000'000);
  // Quanta proportional to 10:10:20:40.
  REQUIRE(an.inner_drr() != nullptr);
  CHECK(an.inner_drr()->quantum(10) == 1522);
  CHECK(an.inner_drr()->quantum(11) == 1522);
  CHECK(an.inner_drr()->quantum(12) == 3044);
  CHECK(an.inner_drr()->quantum(13) == 6088);
}

TEST_CASE("a legacy-only scenario degenerates to the single-stage network") {
  std::ostringstream s;
  s << subscriber_block(20, "legacy", "10Mbps")
    << subscriber_block(21, "legacy", "20Mbps");
  s << "run.duration = 1s\n";
  AccessNetwork an(ScenarioConfig::parse(s.str()));
  CHECK(an.olt_c() == nullptr);
  CHECK(an.inner_drr() == nullptr);
  CHECK(an.inner_csfq() == nullptr);
  CHECK(an.uplink_bank()->vids().size() == 2);
}

TEST_CASE("hellos prime the relays so data never floods to other hosts") {
  AccessNetwork an(mixed_config());
  an.run();
  for (std::uint16_t vid : {10, 11, 20}) {
    INFO("subscriber ", vid);
    CHECK(an.server_host(vid)->stray_frames() == 0);
    CHECK(an.subscriber_host(vid)->stray_frames() == 0);
    CHECK(an.metrics().flow(vid).delivered_frames > 0);
  }
}

TEST_CASE("shared traffic passes the inner stage before the group shaper") {
  AccessNetwork an(mixed_config());
  // TX time at olt_c.up (port 0) and at the olt trunk (port 0), per frame.
  std::map<std::uint64_t, Tick> oltc_tx;
  std::map<std::uint64_t, Tick> olt_tx;
  std::uint64_t stacked_ok = 0, stacked_bad = 0;
  an.network().on_tx = [&](Tick t, const Node& node, int port,
                           const SimFrame& f) {
    if (f.control) return;
    if (an.olt_c() && node.id() == an.olt_c()->id() && port == 0)
      oltc_tx.emplace(f.id, t);
    if (node.id() == an.olt()->id() && port == 0) {
      olt_tx.emplace(f.id, t);
      if (f.subscriber == 10 || f.subscriber == 11) {
        bool good = f.frame.tags.size() == 2 &&
                    f.frame.tags[0].tpid == kTpidStag &&
                    f.frame.tags[0].vid == 100 &&
                    f.frame.tags[1].tpid == kTpidCtag &&
                    f.frame.tags[1].vid == f.subscriber;
        (good ? stacked_ok : stacked_bad)++;
      }
    }
  };
  an.run();
  CHECK(stacked_ok > 0);
  CHECK(stacked_bad == 0);
  // Every grouped frame on the trunk went through the inner scheduler first.
  std::uint64_t matched = 0;
  for (const auto& [id, t_trunk] : olt_tx) {
    auto it = oltc_tx.find(id);
    if (it == oltc_tx.end()) continue;
    matched++;
    CHECK(it->second <= t_trunk);
  }
  CHECK(matched > 0);
}

TEST_CASE("group and legacy shapers stay conformant under overload") {
  AccessNetwork an(mixed_config());
  an.run();
  auto verdicts = an.conformance_verdicts();
  REQUIRE(verdicts.size() == 2);  // legacy 20 + group 100
  for (const auto& v : verdicts) {
    INFO("vid ", v.vid);
    CHECK(v.departed_frames > 0);
    CHECK(v.conformant);
  }
}

TEST_CASE("per-subscriber bytes balance once queues drain") {
  // Sources stop early; by the end everything offered was either delivered
  // or dropped, exactly.
  std::ostringstream s;
  s << "topology.inner_link_rate = 20Mbps\n";
  s << subscriber_block(10, "shared", "10Mbps");
  s << subscriber_block(11, "shared", "10Mbps");
  s << subscriber_block(20, "legacy", "10Mbps");
  s << "group.svid = 100\ngroup.scheduler = drr\n";
  s << source_block(0, 10, "30Mbps") << "sources.0.stop = 2s\n";
  s << source_block(1, 11, "12Mbps", "poisson") << "sources.1.stop = 2s\n";
  s << source_block(2, 20, "15Mbps") << "sources.2.stop = 2s\n";
  s << "run.duration = 6s\nrun.seed = 5\n";
  AccessNetwork an(ScenarioConfig::parse(s.str()));
  an.run();
  for (std::uint16_t vid : {10, 11, 20}) {
    const FlowStats& f = an.metrics().flow(vid);
    INFO("subscriber ", vid);
    CHECK(f.offered_bytes == f.delivered_bytes + f.dropped_bytes);
    CHECK(f.offered_frames == f.delivered_frames + f.dropped_frames);
    CHECK(f.dropped_frames > 0);  // overload made the shapers drop
  }
}

TEST_CASE("csfq inner scheduler wires up and meters member flows") {
  std::ostringstream s;
  s << "topology.inner_link_rate = 9Mbps\n";
  s << subscriber_block(10, "shared", "2Mbps")
    << subscriber_block(11, "shared", "4Mbps")
    << subscriber_block(12, "shared", "10Mbps");
  s << "group.svid = 100\ngroup.scheduler = csfq\n";
  s << "group.csfq_window = 100ms\n";
  s << source_block(0, 10, "2Mbps") << source_block(1, 11, "4Mbps")
    << source_block(2, 12, "10Mbps");
  s << "run.duration = 3s\nrun.seed = 11\n";
  AccessNetwork an(ScenarioConfig::parse(s.str()));
  REQUIRE(an.inner_csfq() != nullptr);
  an.run();
  CHECK(an.inner_csfq()->congested());
  // Fair share settles near the 3.5 Mb/s fixed point of the wire rates.
  CHECK(an.inner_csfq()->fair_share_bps() ==
        doctest::Approx(3.5e6).epsilon(0.10));
  CHECK(an.metrics().flow(10).dropped_frames == 0);
  CHECK(an.metrics().flow(12).dropped_frames > 0);
}

TEST_CASE("no-disadvantage rule on synthetic rows") {
  ScenarioConfig cfg = mixed_config();
  std::vector<SummaryRow> run_rows(3), ref_rows(3);
  for (std::size_t i = 0; i < 3; ++i) {
    run_rows[i].subscriber = ref_rows[i].subscriber =
        static_cast<std::uint16_t>(i == 2 ? 20 : 10 + i);
    ref_rows[i].goodput_bps = 10e6;
    run_rows[i].goodput_bps = 10e6;
  }
  auto ok = no_disadvantage_check(cfg, run_rows, ref_rows, true, true);
  CHECK(ok.pass);
  REQUIRE(ok.lines.size() == 2);  // shared members only

  // 1.5% below reference passes; 3% below fails.
  run_rows[0].goodput_bps = 9.85e6;
  CHECK(no_disadvantage_check(cfg, run_rows, ref_rows, true, true).pass);
  run_rows[0].goodput_bps = 9.7e6;
  auto bad = no_disadvantage_check(cfg, run_rows, ref_rows, true, true);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.lines[0].pass);
  CHECK(bad.lines[1].pass);

  // A conformance failure alone sinks the verdict.
  run_rows[0].goodput_bps = 10e6;
  CHECK_FALSE(no_disadvantage_check(cfg, run_rows, ref_rows, false, true).pass);
}

TEST_CASE("fdb dump shows learned stations after a run") {
  AccessNetwork an(mixed_config());
  an.run();
  auto rows = an.olt()->fdb().dump(an.loop().now());
  CHECK(!rows.empty());
  // The olt keys grouped stations on the S-VID, not the inner C-VID.
  bool saw_group = false;
  for (const auto& r : rows) saw_group = saw_group || r.vid == 100;
  CHECK(saw_group);
}
