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

#ifndef GREENMIG_SCENARIO_HPP
#define GREENMIG_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "greenmig/manycast.hpp"
#include "greenmig/oracle.hpp"
#include "greenmig/topology.hpp"
#include "greenmig/traffic.hpp"

namespace greenmig {

/// Experiment configuration. The defaults are the reference parameter set
/// used throughout: NSFNET, five datacenters, 300 slots of 12.5 Gb/s, fixed
/// grid prices, uniform load/renewable ranges, and the standard granularity
/// and load sweeps.
struct ScenarioConfig {
  std::string topology_path;  // empty: built-in NSFNET
  std::vector<NodeId> dc_nodes{3, 5, 8, 10, 12};
  int servers_per_dc = 1000;
  int vms_per_server = 10;
  std::vector<double> prices{2.1, 2.5, 1.9, 2.8, 2.0};
  int vm_count_min = 0;
  int vm_count_max = 8000;
  double renewable_min = 1000.0;
  double renewable_max = 9000.0;
  double server_power = 10.0;
  double pue = 1.2;
  double bandwidth_min = 1.0;
  double bandwidth_max = 14.0;
  // Background flows are aggregated trunks, spanning the full slot range of
  // a link (1..14 slots at the default 12.5 Gb/s granularity).
  double background_bandwidth_min = 1.0;
  double background_bandwidth_max = 175.0;
  int slots_per_link = 300;
  double slot_capacity = 12.5;
  std::vector<int> granularity_sweep{2, 4, 8, 16};
  std::vector<double> erlangs_sweep{40, 80, 120, 160, 200, 240, 280, 320};
  int k_paths = 3;
  double max_congestion = 1.0;
  int replications = 150;
  std::uint64_t base_seed = 1;
  int max_resample = 1000;
  int threads = 0;  // 0: hardware concurrency

  EnergyParams energy() const { return {server_power, pue}; }
};

ScenarioConfig load_config(const std::string& path);
void validate_config(const ScenarioConfig& cfg, const Graph& g);
Graph config_graph(const ScenarioConfig& cfg);

struct RunResult {
  int replication = 0;
  std::uint64_t seed = 0;  // derived replication seed
  double erlangs = 0.0;
  int granularity = 0;
  std::string algorithm;
  double cost_no_migration = 0.0;
  double cost_after = 0.0;
  int accepted = 0;
  int rejected = 0;
  int vms_migrated = 0;
  int background_offered = 0;
  int background_placed = 0;
  int background_dropped = 0;
  double wall_ms = 0.0;  // heuristic loop only, no I/O

  double saving() const {
    return cost_no_migration > 0
               ? (cost_no_migration - cost_after) / cost_no_migration
               : 0.0;
  }
};

/// One replication's datacenter draw. Resampled until at least one source
/// and one destination exist, so every kept scenario has real demand.
struct Instance {
  std::vector<Datacenter> dcs;
  WorkloadTarget target;
  int resamples = 0;
};

Instance draw_instance(const ScenarioConfig& cfg, int replication);

struct ScenarioRun {
  std::vector<RunResult> results;
  std::map<std::string, std::vector<MigrationRecord>> logs;
  std::vector<Datacenter> initial_dcs;
  SlotMap background_slots;
};

/// Runs the no-migration baseline and each requested algorithm from
/// bit-identical copies of one drawn scenario.
ScenarioRun run_scenario(const ScenarioConfig& cfg, const Graph& g,
                         const RoutingTable& routes, int replication,
                         double erlangs, int granularity,
                         const std::vector<std::string>& algorithms,
                         bool keep_logs = false);

/// Full cross product: replications x loads x granularities x algorithms,
/// deterministic row order (replication-major), reproducible bit-exact from
/// (config, base seed) regardless of thread count.
std::vector<RunResult> sweep(
    const ScenarioConfig& cfg,
    const std::vector<std::string>& algorithms = {"spr", "lpr"});

struct AggregateCell {
  double erlangs = 0.0;
  int granularity = 0;
  std::string algorithm;
  int runs = 0;
  double mean_cost_no_migration = 0.0;
  double stderr_cost_no_migration = 0.0;
  double mean_cost_after = 0.0;
  double stderr_cost_after = 0.0;
  double mean_saving = 0.0;    // mean of per-run saving fractions
  double stderr_saving = 0.0;
  double saving_of_means = 0.0;  // 1 - mean(after)/mean(no migration)
  double mean_accepted = 0.0;
  double mean_rejected = 0.0;
  double mean_vms_migrated = 0.0;
  double mean_background_dropped = 0.0;
  double mean_wall_ms = 0.0;
};

std::vector<AggregateCell> aggregate(const std::vector<RunResult>& rows);

/// Writes results.csv, aggregate.csv, the per-figure plot files and (apart
/// from the deterministic set) timings.csv into out_dir. Only "csv" is a
/// known format. Timing columns live in their own files so that the
/// deterministic outputs are byte-identical across reruns.
void emit(const std::vector<RunResult>& rows, const ScenarioConfig& cfg,
          const std::string& format, const std::string& out_dir);

/// File names emit() writes that must be byte-identical for equal
/// (config, base seed); timing files are excluded.
std::vector<std::string> deterministic_output_files();

struct OracleCheckConfig {
  int instances = 200;
  int subfamily_instances = 50;
  std::uint64_t seed = 20240101;
  int k_paths = 3;
};

struct OracleCheckSummary {
  int instances = 0;
  int subfamily = 0;
  int cap_exceeded = 0;
  int plans_checked = 0;
  int feasibility_failures = 0;
  int witness_failures = 0;  // oracle witnesses failing the validator
  int bound_violations = 0;
  int equality_failures = 0;
  double max_heuristic_gap = 0.0;  // max heuristic cost minus oracle cost

  bool ok() const {
    return feasibility_failures == 0 && witness_failures == 0 &&
           bound_violations == 0 && equality_failures == 0;
  }
};

/// Randomized cross-validation of both heuristics against the exhaustive
/// solver and the independent plan checker.
OracleCheckSummary run_oracle_check(const OracleCheckConfig& cfg);

}  // namespace greenmig

#endif  // GREENMIG_SCENARIO_HPP
