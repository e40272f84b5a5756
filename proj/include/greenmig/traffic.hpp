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

#ifndef GREENMIG_TRAFFIC_HPP
#define GREENMIG_TRAFFIC_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "greenmig/energy.hpp"
#include "greenmig/spectrum.hpp"
#include "greenmig/topology.hpp"

namespace greenmig {

struct BackgroundRequest {
  std::int64_t id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  double bandwidth = 0.0;  // Gb/s
  double arrival = 0.0;    // negative: arrived before the snapshot instant
  double holding = 0.0;
};

struct LoadSpec {
  double erlangs = 0.0;  // mean number of in-flight requests
  double bandwidth_min = 1.0;
  double bandwidth_max = 175.0;  // trunk-sized flows, 1..14 slots
  std::uint64_t seed = 0;
};

struct BackgroundSummary {
  int offered = 0;
  int placed = 0;
  int dropped = 0;
  std::vector<BackgroundRequest> requests;
};

/// Stationary background snapshot: the in-flight request count is Poisson
/// with the offered Erlang load, each request runs between a uniform random
/// ordered node pair with uniform bandwidth, is routed on its shortest path
/// and gets a first-fit interval. Requests that find no interval are dropped
/// and counted. Identical seeds give bit-identical slot maps.
BackgroundSummary steady_state_background(const Graph& g,
                                          const RoutingTable& routes,
                                          SlotMap& slots, const LoadSpec& spec,
                                          double slot_capacity);

/// Per-datacenter shed lists: for each source (hosted above target), the
/// bandwidths of the VMs picked to leave, lowest first. Entries for
/// non-sources stay empty.
struct MigrationDemand {
  std::vector<std::vector<double>> shed;

  int total_vms() const {
    int n = 0;
    for (const auto& s : shed) n += static_cast<int>(s.size());
    return n;
  }
};

MigrationDemand demand_from_gap(std::span<const Datacenter> dcs,
                                const WorkloadTarget& target);

}  // namespace greenmig

#endif  // GREENMIG_TRAFFIC_HPP
