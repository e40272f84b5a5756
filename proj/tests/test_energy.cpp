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

#include <vector>

#include "greenmig/energy.hpp"
#include "greenmig/rng.hpp"

using namespace greenmig;

namespace {

Datacenter make_dc(NodeId node, int servers, int per_server, int hosted,
                   double renewable, double price) {
  Datacenter dc;
  dc.node = node;
  dc.servers = servers;
  dc.vms_per_server = per_server;
  dc.hosted = hosted;
  dc.renewable = renewable;
  dc.price = price;
  dc.vm_bandwidths.assign(hosted, 1.0);
  return dc;
}

// Exhaustive reference: minimum cost over every split of the population.
double enumerate_min_cost(std::vector<Datacenter> dcs,
                          const EnergyParams& ep) {
  int total = 0;
  for (const auto& dc : dcs) total += dc.hosted;
  const int n = static_cast<int>(dcs.size());
  double best = -1;
  std::vector<int> counts(n, 0);
  auto eval = [&]() {
    for (int m = 0; m < n; ++m) dcs[m].hosted = counts[m];
    const double c = total_cost(dcs, ep);
    if (best < 0 || c < best) best = c;
  };
  if (n == 1) {
    counts[0] = total;
    if (counts[0] <= dcs[0].capacity()) eval();
    return best;
  }
  for (int a = 0; a <= std::min(total, dcs[0].capacity()); ++a) {
    if (n == 2) {
      const int b = total - a;
      if (b < 0 || b > dcs[1].capacity()) continue;
      counts = {a, b};
      eval();
    } else {
      for (int b = 0; b <= std::min(total - a, dcs[1].capacity()); ++b) {
        const int c = total - a - b;
        if (c < 0 || c > dcs[2].capacity()) continue;
        counts = {a, b, c};
        eval();
      }
    }
  }
  return best;
}

double cost_of(std::vector<Datacenter> dcs, const WorkloadTarget& t,
               const EnergyParams& ep) {
  for (std::size_t m = 0; m < dcs.size(); ++m) dcs[m].hosted = t.vm_count[m];
  return total_cost(dcs, ep);
}

}  // namespace

TEST_CASE("brown energy") {
  const EnergyParams ep{10.0, 1.2};
  CHECK(brown_energy(make_dc(1, 10, 10, 0, 50, 1), ep) == 0.0);
  CHECK(brown_energy(make_dc(1, 10, 10, 25, 20, 1), ep) ==
        doctest::Approx(16.0));  // 1.2*10*3 - 20
  CHECK(brown_energy(make_dc(1, 10, 10, 80, 1e6, 1), ep) == 0.0);
}

TEST_CASE("total cost") {
  const EnergyParams ep{10.0, 1.2};
  std::vector<Datacenter> dcs{make_dc(1, 10, 10, 0, 0, 2),
                              make_dc(2, 10, 10, 0, 0, 3)};
  CHECK(total_cost(dcs, ep) == 0.0);
  dcs[0] = make_dc(1, 10, 10, 25, 20, 2);
  CHECK(total_cost(dcs, ep) == doctest::Approx(32.0));  // 2 * 16
  dcs[1] = make_dc(2, 10, 10, 25, 20, 3);
  CHECK(total_cost(dcs, ep) == doctest::Approx(32.0 + 48.0));  // additivity
}

TEST_CASE("brown energy monotonicity") {
  const EnergyParams ep{10.0, 1.2};
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const int hosted = rng.uniform_int(0, 99);
    const double phi = rng.uniform(0, 150);
    const auto dc = make_dc(1, 10, 10, hosted, phi, 1);
    CHECK(brown_energy(dc, ep) >= 0.0);
    auto more_load = dc;
    more_load.hosted = hosted + 1;
    more_load.vm_bandwidths.push_back(1.0);
    CHECK(brown_energy(more_load, ep) >= brown_energy(dc, ep));
    auto more_green = dc;
    more_green.renewable = phi + 10;
    CHECK(brown_energy(more_green, ep) <= brown_energy(dc, ep));
  }
}

TEST_CASE("optimal distribution") {
  SUBCASE("single DC is forced") {
    const EnergyParams ep{10.0, 1.2};
    std::vector<Datacenter> dcs{make_dc(1, 10, 10, 37, 100, 2)};
    const auto t = optimal_distribution(dcs, ep);
    CHECK(t.vm_count == std::vector<int>{37});
    CHECK(classify(dcs, t).sources.empty());
    CHECK(classify(dcs, t).destinations.empty());
  }

  SUBCASE("two-DC reference split") {
    // prices (2,3), renewable (2,0), capacity 2 VMs each at one VM per
    // server, unit server power, unit pue, three VMs total.
    const EnergyParams ep{1.0, 1.0};
    std::vector<Datacenter> dcs{make_dc(1, 2, 1, 1, 2, 2),
                                make_dc(2, 2, 1, 2, 0, 3)};
    const auto t = optimal_distribution(dcs, ep);
    CHECK(t.vm_count == std::vector<int>{2, 1});
    CHECK(cost_of(dcs, t, ep) == doctest::Approx(3.0));
    CHECK(cost_of(dcs, t, ep) ==
          doctest::Approx(enumerate_min_cost(dcs, ep)));

    const auto cls = classify(dcs, t);
    CHECK(cls.sources == std::vector<int>{1});
    CHECK(cls.destinations == std::vector<int>{0});
  }

  SUBCASE("infeasible population") {
    const EnergyParams ep{10.0, 1.2};
    std::vector<Datacenter> dcs{make_dc(1, 1, 1, 1, 0, 1)};
    dcs[0].hosted = 2;
    dcs[0].vm_bandwidths.assign(2, 1.0);
    CHECK_THROWS(optimal_distribution(dcs, ep));
  }
}

TEST_CASE("classify partitions and conservation") {
  const EnergyParams ep{10.0, 1.2};
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    std::vector<Datacenter> dcs;
    const int n = rng.uniform_int(1, 3);
    for (int m = 0; m < n; ++m) {
      dcs.push_back(make_dc(m + 1, rng.uniform_int(1, 3), 2,
                            0, rng.uniform(0, 80), rng.uniform(1.0, 3.0)));
      dcs[m].hosted = rng.uniform_int(0, dcs[m].capacity());
      dcs[m].vm_bandwidths.assign(dcs[m].hosted, 1.0);
    }
    const auto t = optimal_distribution(dcs, ep);
    int total_target = 0, total_hosted = 0;
    for (std::size_t m = 0; m < dcs.size(); ++m) {
      total_target += t.vm_count[m];
      total_hosted += dcs[m].hosted;
      CHECK(t.vm_count[m] <= dcs[m].capacity());
    }
    CHECK(total_target == total_hosted);  // conservation

    const auto cls = classify(dcs, t);
    int shed = 0, absorb = 0;
    for (int m : cls.sources) {
      shed += dcs[m].hosted - t.vm_count[m];
      for (int d : cls.destinations) CHECK(m != d);  // disjoint
    }
    for (int m : cls.destinations) absorb += t.vm_count[m] - dcs[m].hosted;
    CHECK(shed == absorb);

    // migrating to the target never costs more than staying put
    WorkloadTarget identity;
    for (const auto& dc : dcs) identity.vm_count.push_back(dc.hosted);
    CHECK(cost_of(dcs, t, ep) <= cost_of(dcs, identity, ep) + 1e-9);
  }
}

TEST_CASE("greedy matches exhaustive enumeration on random small instances") {
  const EnergyParams ep{10.0, 1.2};
  Rng rng(23);
  for (int i = 0; i < 300; ++i) {
    std::vector<Datacenter> dcs;
    const int n = rng.uniform_int(1, 3);
    const int per_server = rng.uniform_int(1, 2);
    for (int m = 0; m < n; ++m) {
      const int servers = rng.uniform_int(1, 6 / per_server);
      auto dc = make_dc(m + 1, servers, per_server, 0,
                        rng.uniform(0, 1.3 * 12 * servers),
                        rng.uniform(1.0, 3.2));
      dc.hosted = rng.uniform_int(0, dc.capacity());
      dc.vm_bandwidths.assign(dc.hosted, 1.0);
      dcs.push_back(std::move(dc));
    }
    const auto t = optimal_distribution(dcs, ep);
    CHECK(cost_of(dcs, t, ep) ==
          doctest::Approx(enumerate_min_cost(dcs, ep)).epsilon(1e-9));
  }
}
