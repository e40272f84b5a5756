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

#include <sstream>

#include "greenmig/manycast.hpp"
#include "greenmig/oracle.hpp"
#include "greenmig/rng.hpp"

using namespace greenmig;

namespace {

MigrationDemand demand_of(std::vector<double> shed) {
  MigrationDemand d;
  d.shed.push_back(std::move(shed));
  return d;
}

Datacenter make_dc(NodeId node, int servers, int per_server, int hosted,
                   double renewable, double price, double bw = 1.0) {
  Datacenter dc;
  dc.node = node;
  dc.servers = servers;
  dc.vms_per_server = per_server;
  dc.hosted = hosted;
  dc.renewable = renewable;
  dc.price = price;
  dc.vm_bandwidths.assign(hosted, bw);
  return dc;
}

}  // namespace

TEST_CASE("group packing") {
  SUBCASE("everything fits within two slots") {
    const auto g = build_group(demand_of({1, 2, 7, 14}), 0, 2, 12.5);
    CHECK(g.bandwidths == std::vector<double>{1, 2, 7, 14});  // sum 24 <= 25
    CHECK(g.width == 2);
  }
  SUBCASE("head VM wider than the cap") {
    CHECK_THROWS_AS(build_group(demand_of({14, 1}), 0, 1, 12.5),
                    VmTooWideError);
  }
  SUBCASE("large cap takes the whole list") {
    const auto g = build_group(demand_of({10, 10, 10}), 0, 16, 12.5);
    CHECK(g.bandwidths.size() == 3);
    CHECK(g.width == 3);  // 30 / 12.5
  }
  SUBCASE("vm budget cuts the prefix") {
    const auto g = build_group(demand_of({1, 2, 3}), 0, 16, 12.5, 2);
    CHECK(g.bandwidths == std::vector<double>{1, 2});
  }
  SUBCASE("prefix stops before the cap is exceeded") {
    const auto g = build_group(demand_of({12, 12, 12}), 0, 1, 12.5);
    CHECK(g.bandwidths == std::vector<double>{12});
    CHECK(g.width == 1);
  }
}

TEST_CASE("spr on a two-hop line") {
  // 1 - 2 - 3, source DC at node 1 (no renewable), sink at node 3.
  Graph graph(3, {{1, 2}, {2, 3}});
  RoutingTable routes(graph, {1, 3}, 3);
  std::vector<Datacenter> dcs{make_dc(1, 2, 2, 2, 0.0, 3.0, 5.0),
                              make_dc(3, 2, 2, 0, 1e6, 1.0)};
  EnergyParams ep{10.0, 1.2};
  ScenarioState state{&graph, &routes, SlotMap(graph.link_count(), 32),
                      dcs,    ep,      optimal_distribution(dcs, ep),
                      12.5};

  SUBCASE("empty demand yields no records") {
    ScenarioState balanced = state;
    balanced.target.vm_count = {2, 0};  // already satisfied
    const auto records = run_spr(balanced, {Algorithm::kSpr, 4, 3, 1.0});
    CHECK(records.empty());
    const auto lpr_records = run_lpr(balanced, {Algorithm::kLpr, 4, 3, 1.0});
    CHECK(lpr_records.empty());
  }

  SUBCASE("one group moves on the only path at slot zero") {
    const auto records = run_spr(state, {Algorithm::kSpr, 4, 3, 1.0});
    REQUIRE(records.size() == 1);
    CHECK(records[0].accepted);
    CHECK(records[0].path->nodes() == std::vector<NodeId>{1, 2, 3});
    CHECK(records[0].start_slot == 0);
    CHECK(records[0].group.bandwidths.size() == 2);
    CHECK(records[0].congestion_before == 0.0);
    CHECK(state.dcs[0].hosted == 0);
    CHECK(state.dcs[1].hosted == 2);
    CHECK(state.dcs[1].vm_bandwidths.size() == 2);
    CHECK(total_cost(state.dcs, ep) == 0.0);
  }

  SUBCASE("saturated shortest path terminates the run at zero accepted") {
    state.slots.allocate({Path(graph, {1, 2}), 0, 32, -1});
    const auto records = run_spr(state, {Algorithm::kSpr, 4, 3, 1.0});
    REQUIRE(records.size() == 1);
    CHECK(!records[0].accepted);
    CHECK(state.dcs[0].hosted == 2);  // nothing moved
  }

  SUBCASE("vm wider than the cap ends the run quietly") {
    state.dcs[0].vm_bandwidths.assign(2, 14.0);  // needs 2 slots each
    const auto records = run_spr(state, {Algorithm::kSpr, 1, 3, 1.0});
    CHECK(records.empty());
    CHECK(state.dcs[0].hosted == 2);
  }
}

TEST_CASE("lpr picks the least congested candidate path") {
  Graph graph(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}});
  RoutingTable routes(graph, {1, 4}, 3);
  std::vector<Datacenter> dcs{make_dc(1, 2, 2, 2, 0.0, 3.0, 5.0),
                              make_dc(4, 2, 2, 0, 1e6, 1.0)};
  EnergyParams ep{10.0, 1.2};
  ScenarioState state{&graph, &routes, SlotMap(graph.link_count(), 20),
                      dcs,    ep,      optimal_distribution(dcs, ep),
                      12.5};

  SUBCASE("0.4 vs 0.1 congestion") {
    state.slots.allocate({Path(graph, {1, 2}), 0, 8, -1});  // 0.4 on 1-2-4
    state.slots.allocate({Path(graph, {1, 3}), 0, 2, -2});  // 0.1 on 1-3-4
    const auto records = run_lpr(state, {Algorithm::kLpr, 4, 3, 1.0});
    REQUIRE(!records.empty());
    CHECK(records[0].accepted);
    CHECK(records[0].path->nodes() == std::vector<NodeId>{1, 3, 4});
    CHECK(records[0].congestion_before == doctest::Approx(0.1));
  }

  SUBCASE("lpr provisions where spr gives up") {
    // Shortest path 1-2-4 fully busy, alternative 1-3-4 free.
    state.slots.allocate({Path(graph, {1, 2}), 0, 20, -1});
    state.slots.allocate({Path(graph, {2, 4}), 0, 20, -2});

    ScenarioState for_spr = state;
    const auto spr_records = run_spr(for_spr, {Algorithm::kSpr, 4, 3, 1.0});
    REQUIRE(spr_records.size() == 1);
    CHECK(!spr_records[0].accepted);

    const auto lpr_records = run_lpr(state, {Algorithm::kLpr, 4, 3, 1.0});
    REQUIRE(!lpr_records.empty());
    CHECK(lpr_records[0].accepted);
    CHECK(lpr_records[0].path->nodes() == std::vector<NodeId>{1, 3, 4});
  }
}

// A family of instances whose shortest path is saturated while an
// alternative stays usable: the k-path scan must provision at least as
// many migrations as the single-path walk.
TEST_CASE("lpr accepts at least as much as spr under saturation") {
  const EnergyParams ep{10.0, 1.2};
  for (int slots : {8, 20, 40}) {
    for (int vms : {2, 4, 6}) {
      Graph graph(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}});
      RoutingTable routes(graph, {1, 4}, 3);
      std::vector<Datacenter> dcs{make_dc(1, 3, 2, vms, 0.0, 3.0, 5.0),
                                  make_dc(4, 3, 2, 0, 1e6, 1.0)};
      ScenarioState state{&graph,
                          &routes,
                          SlotMap(graph.link_count(), slots),
                          dcs,
                          ep,
                          optimal_distribution(dcs, ep),
                          12.5};
      state.slots.allocate({Path(graph, {1, 2, 4}), 0, slots, -1});

      ScenarioState for_spr = state;
      const auto spr = run_spr(for_spr, {Algorithm::kSpr, 2, 3, 1.0});
      const auto lpr = run_lpr(state, {Algorithm::kLpr, 2, 3, 1.0});
      int spr_accepted = 0, lpr_accepted = 0;
      for (const auto& r : spr) spr_accepted += r.accepted;
      for (const auto& r : lpr) lpr_accepted += r.accepted;
      CHECK(spr_accepted == 0);  // its one path is gone
      CHECK(lpr_accepted >= spr_accepted);
      CHECK(lpr_accepted > 0);
    }
  }
}

TEST_CASE("round count roughly halves when the granularity doubles") {
  Graph graph(3, {{1, 2}, {2, 3}});
  RoutingTable routes(graph, {1, 3}, 3);
  EnergyParams ep{10.0, 1.2};
  std::vector<int> rounds;
  for (int granularity : {2, 4, 8}) {
    std::vector<Datacenter> dcs{make_dc(1, 4, 10, 32, 0.0, 3.0, 6.25),
                                make_dc(3, 8, 10, 0, 1e6, 1.0)};
    ScenarioState state{&graph, &routes, SlotMap(graph.link_count(), 4000),
                        dcs,    ep,      optimal_distribution(dcs, ep),
                        12.5};
    const auto records =
        run_spr(state, {Algorithm::kSpr, granularity, 3, 1.0});
    int accepted = 0;
    for (const auto& r : records) accepted += r.accepted;
    CHECK(accepted == static_cast<int>(records.size()));  // ample spectrum
    rounds.push_back(accepted);
  }
  REQUIRE(rounds.size() == 3);
  CHECK(rounds[0] == 8);  // 32 VMs, 4 per 2-slot group
  CHECK(rounds[1] == 4);
  CHECK(rounds[2] == 2);
}

TEST_CASE("random instances keep the engine invariants") {
  Rng rng(31);
  const EnergyParams ep{10.0, 1.2};
  for (int trial = 0; trial < 120; ++trial) {
    TinyFamilyOptions opts;
    const TinyInstance inst = random_tiny_instance(rng, opts);
    std::vector<NodeId> endpoints;
    for (const auto& dc : inst.dcs) endpoints.push_back(dc.node);
    const RoutingTable routes(inst.graph, endpoints, 3);
    const WorkloadTarget target = optimal_distribution(inst.dcs, inst.energy);
    const double cost_before = total_cost(inst.dcs, inst.energy);
    double max_price = 0;
    for (const auto& dc : inst.dcs) max_price = std::max(max_price, dc.price);

    for (Algorithm kind : {Algorithm::kSpr, Algorithm::kLpr}) {
      ScenarioState state{&inst.graph,
                          &routes,
                          SlotMap(inst.graph.link_count(),
                                  inst.slots_per_link),
                          inst.dcs,
                          inst.energy,
                          target,
                          inst.slot_capacity};
      for (const auto& a : inst.background) state.slots.allocate(a);
      HeuristicConfig cfg{kind, inst.granularity, 3, inst.max_congestion};
      const auto records =
          kind == Algorithm::kSpr ? run_spr(state, cfg) : run_lpr(state, cfg);

      std::vector<int> moved_from(inst.dcs.size(), 0);
      for (const auto& rec : records) {
        if (!rec.accepted) continue;
        CHECK(rec.group.width <= inst.granularity);
        CHECK(rec.group.width ==
              slots_needed(rec.group.total_bandwidth, inst.slot_capacity));
        moved_from[rec.group.source_dc] +=
            static_cast<int>(rec.group.bandwidths.size());
      }
      for (std::size_t m = 0; m < inst.dcs.size(); ++m) {
        // never exceeds capacity, never worse than the original gap
        CHECK(state.dcs[m].hosted <= inst.dcs[m].capacity());
        CHECK(moved_from[m] <=
              std::max(0, inst.dcs[m].hosted - target.vm_count[m]));
        CHECK(static_cast<int>(state.dcs[m].vm_bandwidths.size()) ==
              state.dcs[m].hosted);
      }
      // Cost can only regress by the two server activations that a
      // first-reject cut-off can strand (documented slack).
      const double slack = 2 * ep.pue * ep.server_power * max_price + 1e-9;
      CHECK(total_cost(state.dcs, inst.energy) <= cost_before + slack);

      // rejected record, if any, is final
      for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        CHECK(records[i].accepted);
      }
    }
  }
}

TEST_CASE("migration log format") {
  Graph graph(3, {{1, 2}, {2, 3}});
  RoutingTable routes(graph, {1, 3}, 3);
  std::vector<Datacenter> dcs{make_dc(1, 2, 2, 2, 0.0, 3.0, 5.0),
                              make_dc(3, 2, 2, 0, 1e6, 1.0)};
  EnergyParams ep{10.0, 1.2};
  ScenarioState state{&graph, &routes, SlotMap(graph.link_count(), 32),
                      dcs,    ep,      optimal_distribution(dcs, ep),
                      12.5};
  const auto records = run_spr(state, {Algorithm::kSpr, 4, 3, 1.0});
  std::ostringstream out;
  write_migration_log_csv(out, state.dcs, records);
  CHECK(out.str() ==
        "round,source_node,dest_node,vms,total_bandwidth_gbps,width,"
        "path_nodes,start_slot,congestion_before,accepted\n"
        "0,1,3,2,10,1,1-2-3,0,0,1\n");

  // rejected rows keep the path but leave the slot column empty
  ScenarioState blocked{&graph, &routes, SlotMap(graph.link_count(), 4),
                        dcs,    ep,      optimal_distribution(dcs, ep),
                        12.5};
  blocked.slots.allocate({Path(graph, {1, 2}), 0, 4, -1});
  const auto rejected = run_spr(blocked, {Algorithm::kSpr, 4, 3, 1.0});
  std::ostringstream out2;
  write_migration_log_csv(out2, blocked.dcs, rejected);
  CHECK(out2.str() ==
        "round,source_node,dest_node,vms,total_bandwidth_gbps,width,"
        "path_nodes,start_slot,congestion_before,accepted\n"
        "0,1,3,2,10,1,1-2-3,,1,0\n");
}
