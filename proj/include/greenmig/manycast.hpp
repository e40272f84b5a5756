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

#ifndef GREENMIG_MANYCAST_HPP
#define GREENMIG_MANYCAST_HPP

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "greenmig/energy.hpp"
#include "greenmig/spectrum.hpp"
#include "greenmig/topology.hpp"
#include "greenmig/traffic.hpp"

namespace greenmig {

enum class Algorithm {
  kSpr,  // shortest-path routing between the ranked source/destination
  kLpr,  // least-congested of the k-shortest paths over all pairs
};

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct HeuristicConfig {
  Algorithm kind = Algorithm::kSpr;
  int granularity = 2;          // slot cap per migration group
  int k_paths = 3;              // candidate paths per pair (kLpr only)
  double max_congestion = 1.0;  // admission threshold on the path ratio
};

/// VMs bundled into one migration: a prefix of the source's shed list
/// (lowest bandwidth first), wide enough for at most `granularity` slots.
struct MigrationGroup {
  int source_dc = -1;  // index into the datacenter list
  int dest_dc = -1;
  std::vector<double> bandwidths;
  double total_bandwidth = 0.0;
  int width = 0;  // slots_needed(total_bandwidth)
};

/// Raised when the next pending VM alone needs more slots than the
/// granularity cap allows, so no non-empty group can be formed.
struct VmTooWideError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Largest prefix of the source's pending shed list whose combined width
/// fits the granularity cap, taking at most max_vms entries. Throws
/// VmTooWideError if even the first VM is too wide.
MigrationGroup build_group(const MigrationDemand& demand, int source_dc,
                           int granularity, double slot_capacity,
                           int max_vms = std::numeric_limits<int>::max());

struct MigrationRecord {
  int round = 0;
  MigrationGroup group;
  std::optional<Path> path;
  std::optional<int> start_slot;
  double congestion_before = 0.0;
  bool accepted = false;
};

/// Everything one heuristic run owns and mutates: the slot map and the
/// datacenter loads evolve as groups are admitted. Copy the state to run
/// several algorithms from identical starting points.
struct ScenarioState {
  const Graph* graph = nullptr;
  const RoutingTable* routes = nullptr;
  SlotMap slots;
  std::vector<Datacenter> dcs;
  EnergyParams energy;
  WorkloadTarget target;
  double slot_capacity = 12.5;
};

/// Shortest-path manycast. Each round picks the source with the most VMs
/// left to shed and the destination with the most renewable headroom (ties:
/// lower node id), builds a group, and admits it on the shortest path if the
/// congestion test passes; the first rejected group ends the whole run.
std::vector<MigrationRecord> run_spr(ScenarioState& state,
                                     const HeuristicConfig& cfg);

/// Least-congested-path manycast. Each round scans the k-shortest paths of
/// every (source, destination) pair, takes the path with the fewest busy
/// slots (ties: fewer hops, then lower source node, destination node, node
/// sequence) and lets the path choose the pair. Admission and termination
/// as in run_spr.
std::vector<MigrationRecord> run_lpr(ScenarioState& state,
                                     const HeuristicConfig& cfg);

/// Per-run migration log: round, endpoints, path, slot interval, admission.
void write_migration_log_csv(std::ostream& out,
                             std::span<const Datacenter> dcs,
                             std::span<const MigrationRecord> records);

}  // namespace greenmig

#endif  // GREENMIG_MANYCAST_HPP
