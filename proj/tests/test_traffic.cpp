// Copyright 2026 The greenmig Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "greenmig/traffic.hpp"

using namespace greenmig;

namespace {

double occupied_fraction(const SlotMap& sm) {
  return static_cast<double>(sm.occupied_bits().size()) /
         (sm.link_count() * sm.slots_per_link());
}

}  // namespace

TEST_CASE("zero load leaves the slot map untouched") {
  const Graph g = build_nsfnet();
  const RoutingTable routes(g, {3, 5}, 1);
  SlotMap sm(g.link_count(), 40);
  const auto summary =
      steady_state_background(g, routes, sm, LoadSpec{0, 1, 175, 42}, 12.5);
  CHECK(summary.offered == 0);
  CHECK(summary.requests.empty());
  CHECK(sm.occupied_bits().empty());
}

TEST_CASE("fixed seed reproduces the slot map bit for bit") {
  const Graph g = build_nsfnet();
  const RoutingTable routes(g, {3, 5}, 1);
  const LoadSpec spec{60, 1, 175, 7};
  SlotMap a(g.link_count(), 60), b(g.link_count(), 60);
  const auto sa = steady_state_background(g, routes, a, spec, 12.5);
  const auto sb = steady_state_background(g, routes, b, spec, 12.5);
  CHECK(a.occupied_bits() == b.occupied_bits());
  CHECK(sa.offered == sb.offered);
  CHECK(sa.dropped == sb.dropped);
  REQUIRE(sa.requests.size() == sb.requests.size());
  for (std::size_t i = 0; i < sa.requests.size(); ++i) {
    CHECK(sa.requests[i].src == sb.requests[i].src);
    CHECK(sa.requests[i].bandwidth == sb.requests[i].bandwidth);
  }
}

TEST_CASE("snapshot requests are in flight and well formed") {
  const Graph g = build_nsfnet();
  const RoutingTable routes(g, {3, 5}, 1);
  SlotMap sm(g.link_count(), 300);
  const LoadSpec spec{80, 1, 175, 11};
  const auto summary = steady_state_background(g, routes, sm, spec, 12.5);
  CHECK(summary.offered == summary.placed + summary.dropped);
  CHECK(sm.active_allocation_count() == summary.requests.size());
  for (const auto& req : summary.requests) {
    CHECK(req.src != req.dst);
    CHECK(req.bandwidth >= spec.bandwidth_min);
    CHECK(req.bandwidth <= spec.bandwidth_max);
    CHECK(req.arrival <= 0.0);
    CHECK(req.arrival + req.holding > 0.0);  // still holding at the snapshot
    CHECK(req.holding > 0.0);
  }
}

TEST_CASE("occupancy and drops trend upward with load") {
  const Graph g = build_nsfnet();
  const RoutingTable routes(g, {3, 5}, 1);
  int occupancy_wins = 0;
  double low_drops = 0, high_drops = 0;
  const int seeds = 100;
  for (int seed = 0; seed < seeds; ++seed) {
    SlotMap lo(g.link_count(), 40), hi(g.link_count(), 40);
    const auto ls = steady_state_background(
        g, routes, lo, LoadSpec{8, 1, 175, std::uint64_t(seed)}, 12.5);
    const auto hs = steady_state_background(
        g, routes, hi, LoadSpec{80, 1, 175, std::uint64_t(seed)}, 12.5);
    if (occupied_fraction(hi) > occupied_fraction(lo)) ++occupancy_wins;
    low_drops += ls.dropped;
    high_drops += hs.dropped;
  }
  CHECK(occupancy_wins >= seeds * 9 / 10);  // sign test, overwhelming margin
  CHECK(high_drops / seeds >= low_drops / seeds);
}

TEST_CASE("demand from the workload gap") {
  std::vector<Datacenter> dcs(2);
  dcs[0].node = 1;
  dcs[0].servers = 4;
  dcs[0].vms_per_server = 2;
  dcs[0].hosted = 4;
  dcs[0].vm_bandwidths = {14.0, 2.0, 7.0, 1.0};
  dcs[0].price = 2;
  dcs[1].node = 2;
  dcs[1].servers = 4;
  dcs[1].vms_per_server = 2;
  dcs[1].hosted = 1;
  dcs[1].vm_bandwidths = {3.0};
  dcs[1].price = 1;

  SUBCASE("matched target means no demand") {
    WorkloadTarget t{{4, 1}};
    const auto demand = demand_from_gap(dcs, t);
    CHECK(demand.total_vms() == 0);
  }

  SUBCASE("lowest-bandwidth VMs leave first") {
    WorkloadTarget t{{1, 4}};
    const auto demand = demand_from_gap(dcs, t);
    CHECK(demand.shed[0] == std::vector<double>{1.0, 2.0, 7.0});
    CHECK(demand.shed[1].empty());
    // conservation: shed total equals absorb total
    int absorb = 0;
    for (std::size_t m = 0; m < dcs.size(); ++m) {
      absorb += std::max(0, t.vm_count[m] - dcs[m].hosted);
    }
    CHECK(demand.total_vms() == absorb);
  }

  SUBCASE("bandwidth list must match the hosted count") {
    dcs[0].vm_bandwidths.pop_back();
    WorkloadTarget t{{1, 4}};
    CHECK_THROWS(demand_from_gap(dcs, t));
  }
}
