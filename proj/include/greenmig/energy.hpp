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

#ifndef GREENMIG_ENERGY_HPP
#define GREENMIG_ENERGY_HPP

#include <span>
#include <vector>

#include "greenmig/topology.hpp"

namespace greenmig {

struct Datacenter {
  NodeId node = 0;
  int servers = 0;         // physical servers available
  int vms_per_server = 1;  // VM slots per active server
  int hosted = 0;          // VMs currently placed here
  double renewable = 0.0;  // on-site renewable supply, energy units
  double price = 1.0;      // grid cost per energy unit
  std::vector<double> vm_bandwidths;  // migration bandwidth per hosted VM, Gb/s

  int capacity() const { return servers * vms_per_server; }
};

struct EnergyParams {
  double server_power = 10.0;  // draw of one active server, energy units
  double pue = 1.2;            // facility-to-server power ratio, >= 1
};

/// Active servers needed for a VM count (idle servers power off).
int active_servers(int hosted, int vms_per_server);

/// Grid energy drawn by one datacenter: facility demand of its active
/// servers minus what the on-site renewable supply covers, floored at zero.
double brown_energy(const Datacenter& dc, const EnergyParams& ep);

/// Renewable headroom left after powering the current load; the destination
/// ranking key used by the migration heuristics.
double available_renewable(const Datacenter& dc, const EnergyParams& ep);

/// Grid cost summed over datacenters, each at its own price.
double total_cost(std::span<const Datacenter> dcs, const EnergyParams& ep);

/// Per-datacenter VM counts to aim for; conserves the total VM population.
struct WorkloadTarget {
  std::vector<int> vm_count;  // aligned with the datacenter list
};

/// Cost-minimizing placement of the whole VM population, ignoring the
/// network. Server-sized blocks are granted one at a time to the datacenter
/// whose next block is cheapest (exact marginal: the grid cost increase of
/// activating one more server, zero while renewable covers it); ties go to
/// the lower price, then the lower node id. Block counts are then converted
/// to VM counts keeping as many VMs in place as the granted capacity allows,
/// with the remainder spread in ascending node order.
///
/// Exact for uniform vms_per_server: per-DC cost is convex in active
/// servers, so the greedy matches exhaustive enumeration.
/// Throws if the population exceeds aggregate capacity.
WorkloadTarget optimal_distribution(std::span<const Datacenter> dcs,
                                    const EnergyParams& ep);

/// Indices of datacenters that must shed VMs (hosted above target) and that
/// can absorb them (hosted below target). Disjoint; total shed equals total
/// absorb by target conservation.
struct Classification {
  std::vector<int> sources;
  std::vector<int> destinations;
};

Classification classify(std::span<const Datacenter> dcs,
                        const WorkloadTarget& target);

}  // namespace greenmig

#endif  // GREENMIG_ENERGY_HPP
