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

#include "greenmig/energy.hpp"

#include <algorithm>
#include <stdexcept>

namespace greenmig {

int active_servers(int hosted, int vms_per_server) {
  if (vms_per_server < 1) {
    throw std::invalid_argument("active_servers: vms_per_server < 1");
  }
  if (hosted < 0) throw std::invalid_argument("active_servers: negative load");
  return (hosted + vms_per_server - 1) / vms_per_server;
}

namespace {

double facility_draw(int servers_on, const EnergyParams& ep) {
  return ep.pue * ep.server_power * servers_on;
}

}  // namespace

double brown_energy(const Datacenter& dc, const EnergyParams& ep) {
  const int on = active_servers(dc.hosted, dc.vms_per_server);
  return std::max(0.0, facility_draw(on, ep) - dc.renewable);
}

double available_renewable(const Datacenter& dc, const EnergyParams& ep) {
  const int on = active_servers(dc.hosted, dc.vms_per_server);
  return std::max(0.0, dc.renewable - facility_draw(on, ep));
}

double total_cost(std::span<const Datacenter> dcs, const EnergyParams& ep) {
  double sum = 0.0;
  for (const auto& dc : dcs) sum += dc.price * brown_energy(dc, ep);
  return sum;
}

WorkloadTarget optimal_distribution(std::span<const Datacenter> dcs,
                                    const EnergyParams& ep) {
  const int n = static_cast<int>(dcs.size());
  if (n == 0) throw std::invalid_argument("optimal_distribution: no DCs");
  long long population = 0, capacity = 0;
  for (const auto& dc : dcs) {
    if (dc.hosted < 0 || dc.hosted > dc.capacity()) {
      throw std::invalid_argument("optimal_distribution: load out of range");
    }
    population += dc.hosted;
    capacity += dc.capacity();
  }
  if (population > capacity) {
    throw std::invalid_argument(
        "optimal_distribution: population exceeds aggregate capacity");
  }

  // Grid cost increase of turning on server number (granted+1) in dc m.
  auto marginal = [&](int m, int granted) {
    const double before =
        std::max(0.0, facility_draw(granted, ep) - dcs[m].renewable);
    const double after =
        std::max(0.0, facility_draw(granted + 1, ep) - dcs[m].renewable);
    return dcs[m].price * (after - before);
  };

  std::vector<int> granted(n, 0);
  long long vm_capacity_granted = 0;
  while (vm_capacity_granted < population) {
    int best = -1;
    double best_cost = 0.0;
    for (int m = 0; m < n; ++m) {
      if (granted[m] >= dcs[m].servers) continue;
      const double c = marginal(m, granted[m]);
      if (best < 0 || c < best_cost ||
          (c == best_cost && (dcs[m].price < dcs[best].price ||
                              (dcs[m].price == dcs[best].price &&
                               dcs[m].node < dcs[best].node)))) {
        best = m;
        best_cost = c;
      }
    }
    ++granted[best];
    vm_capacity_granted += dcs[best].vms_per_server;
  }

  // Fill granted capacity with VMs, moving as few as possible: keep what
  // fits in place, then pour the displaced remainder into spare capacity in
  // ascending node order.
  WorkloadTarget target;
  target.vm_count.assign(n, 0);
  long long remainder = population;
  for (int m = 0; m < n; ++m) {
    target.vm_count[m] =
        std::min(dcs[m].hosted, granted[m] * dcs[m].vms_per_server);
    remainder -= target.vm_count[m];
  }
  std::vector<int> order(n);
  for (int m = 0; m < n; ++m) order[m] = m;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return dcs[a].node < dcs[b].node; });
  for (int m : order) {
    if (remainder == 0) break;
    const int spare = granted[m] * dcs[m].vms_per_server - target.vm_count[m];
    const int add = static_cast<int>(std::min<long long>(spare, remainder));
    target.vm_count[m] += add;
    remainder -= add;
  }
  return target;
}

Classification classify(std::span<const Datacenter> dcs,
                        const WorkloadTarget& target) {
  if (target.vm_count.size() != dcs.size()) {
    throw std::invalid_argument("classify: target size mismatch");
  }
  Classification c;
  for (std::size_t m = 0; m < dcs.size(); ++m) {
    if (dcs[m].hosted > target.vm_count[m]) c.sources.push_back(int(m));
    if (dcs[m].hosted < target.vm_count[m]) c.destinations.push_back(int(m));
  }
  return c;
}

}  // namespace greenmig
