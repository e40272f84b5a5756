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

#ifndef GREENMIG_ORACLE_HPP
#define GREENMIG_ORACLE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "greenmig/energy.hpp"
#include "greenmig/manycast.hpp"
#include "greenmig/rng.hpp"
#include "greenmig/spectrum.hpp"
#include "greenmig/topology.hpp"

namespace greenmig {

/// Desk-scale problem instance for the exhaustive solver. The caps exist
/// because the full problem is enumeration-hard; the solver aborts with
/// CapExceededError once it has visited state_cap search states.
struct TinyInstance {
  Graph graph;
  int slots_per_link = 8;
  double slot_capacity = 12.5;
  std::vector<Datacenter> dcs;
  EnergyParams energy;
  int granularity = 2;
  double max_congestion = 1.0;
  std::vector<SpectrumAllocation> background;
  std::uint64_t state_cap = 10'000'000;
};

struct CapExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PlannedMigration {
  int source_dc = -1;
  int dest_dc = -1;
  std::vector<double> bandwidths;
  Path path;
  int start_slot = 0;
  int width = 0;
};

struct OracleSolution {
  double cost = 0.0;
  std::vector<PlannedMigration> witness;  // empty when staying put is optimal
  std::uint64_t states_explored = 0;
};

/// Exact minimum grid cost over every VM-to-datacenter assignment that
/// admits a feasible slot plan: each moved set may be split into groups of
/// at most `granularity` slots, each group takes any simple path and any
/// start slot, all intervals are pairwise disjoint with each other and the
/// background, and some admission order keeps every group under the
/// congestion threshold. Bounds the round-based heuristics from below; it
/// does not replicate their greedy structure.
OracleSolution solve_exact(const TinyInstance& inst);

/// A migration plan as the heuristics emit it, rechecked from scratch.
struct PlanCheckInput {
  const Graph* graph = nullptr;
  int slots_per_link = 0;
  double slot_capacity = 12.5;
  std::vector<Datacenter> dcs;  // state before any migration
  WorkloadTarget target;
  int granularity = 2;
  double max_congestion = 1.0;
  std::vector<SpectrumAllocation> background;
  std::vector<MigrationRecord> migrations;  // admission order
};

struct FeasibilityReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Independent validator: re-derives every constraint from the raw plan
/// without touching SlotMap. Violations are tagged by constraint:
/// "conservation", "dc-capacity", "granularity-cap", "width-arithmetic",
/// "link-capacity", "path-continuity", "non-overlap", "congestion-ratio".
FeasibilityReport check_feasible(const PlanCheckInput& input);

struct TinyFamilyOptions {
  /// One deficit DC, one surplus DC, no background, ample spectrum: the
  /// family on which heuristics provably reach the oracle optimum.
  bool single_pair_uncongested = false;
  std::uint64_t state_cap = 2'000'000;
};

/// Randomized instance small enough for solve_exact. Draws the graph shape,
/// slot budget, granularity, congestion threshold, datacenters and a little
/// pre-placed background traffic from the given generator.
TinyInstance random_tiny_instance(Rng& rng, const TinyFamilyOptions& opts);

}  // namespace greenmig

#endif  // GREENMIG_ORACLE_HPP
