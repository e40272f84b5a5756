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

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "greenmig/scenario.hpp"

namespace {

greenmig::ScenarioConfig make_config(const std::string& config_path,
                                     std::uint64_t seed, bool seed_set,
                                     int threads) {
  greenmig::ScenarioConfig cfg;
  if (!config_path.empty()) cfg = greenmig::load_config(config_path);
  if (seed_set) cfg.base_seed = seed;
  if (threads > 0) cfg.threads = threads;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Renewable-aware inter-datacenter VM migration simulator over an "
      "elastic optical network"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--seed", seed, "base seed override")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--threads", threads, "worker threads (0 = hardware)");

  auto* run_cmd = app.add_subcommand("run", "single scenario replication");
  int rep = 0;
  double erlangs = 40;
  int granularity = 2;
  std::vector<std::string> algorithms{"spr", "lpr"};
  std::string dump_spectrum;
  run_cmd->add_option("--replication", rep, "replication index");
  run_cmd->add_option("--erlangs", erlangs, "background load");
  run_cmd->add_option("--kappa", granularity, "migration granularity (slots)");
  run_cmd->add_option("--algorithms", algorithms,
                      "algorithms to run (spr, lpr)")
      ->delimiter(',');
  run_cmd->add_option("--dump-spectrum", dump_spectrum,
                      "write post-background occupancy CSV to this file");

  auto* sweep_cmd = app.add_subcommand("sweep", "full load x granularity sweep");
  int reps_override = -1;
  std::vector<int> kappa_override;
  std::vector<double> erlangs_override;
  std::vector<std::string> sweep_algorithms{"spr", "lpr"};
  sweep_cmd->add_option("--algorithms", sweep_algorithms,
                        "algorithms to sweep (spr, lpr)")
      ->delimiter(',');
  sweep_cmd->add_option("--reps", reps_override, "replication count override");
  sweep_cmd->add_option("--kappa", kappa_override, "granularity sweep override")
      ->delimiter(',');
  sweep_cmd->add_option("--erlangs", erlangs_override, "load sweep override")
      ->delimiter(',');

  auto* oracle_cmd =
      app.add_subcommand("oracle-check", "validate heuristics on tiny "
                                         "instances against the exact solver");
  int instances = 200;
  int subfamily = 50;
  oracle_cmd->add_option("--instances", instances, "general instances");
  oracle_cmd->add_option("--subfamily", subfamily,
                         "single-pair uncongested instances");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      auto cfg = make_config(config_path, seed, seed_set, threads);
      const greenmig::Graph g = greenmig::config_graph(cfg);
      greenmig::validate_config(cfg, g);
      const greenmig::RoutingTable routes(g, cfg.dc_nodes, cfg.k_paths);
      auto run = greenmig::run_scenario(cfg, g, routes, rep, erlangs,
                                        granularity, algorithms,
                                        /*keep_logs=*/true);
      greenmig::emit(run.results, cfg, "csv", out_dir);
      for (const auto& [name, records] : run.logs) {
        std::ofstream log(std::filesystem::path(out_dir) /
                          ("migrations_" + name + ".csv"));
        greenmig::write_migration_log_csv(log, run.initial_dcs, records);
      }
      if (!dump_spectrum.empty()) {
        std::ofstream dump(dump_spectrum);
        run.background_slots.dump_occupancy_csv(dump);
      }
      for (const auto& r : run.results) {
        std::cout << r.algorithm << ": cost " << r.cost_no_migration
                  << " -> " << r.cost_after << " (saving "
                  << 100.0 * r.saving() << "%), " << r.accepted
                  << " migrations, " << r.background_dropped
                  << " background drops\n";
      }
    } else if (*sweep_cmd) {
      auto cfg = make_config(config_path, seed, seed_set, threads);
      if (reps_override >= 0) cfg.replications = reps_override;
      if (!kappa_override.empty()) cfg.granularity_sweep = kappa_override;
      if (!erlangs_override.empty()) cfg.erlangs_sweep = erlangs_override;
      auto rows = greenmig::sweep(cfg, sweep_algorithms);
      greenmig::emit(rows, cfg, "csv", out_dir);
      std::cout << "wrote " << rows.size() << " rows to " << out_dir << "\n";
    } else if (*oracle_cmd) {
      greenmig::OracleCheckConfig ocfg;
      ocfg.instances = instances;
      ocfg.subfamily_instances = subfamily;
      if (seed_set) ocfg.seed = seed;
      auto summary = greenmig::run_oracle_check(ocfg);
      std::cout << "instances=" << summary.instances
                << " subfamily=" << summary.subfamily
                << " cap_exceeded=" << summary.cap_exceeded
                << " plans_checked=" << summary.plans_checked
                << " feasibility_failures=" << summary.feasibility_failures
                << " witness_failures=" << summary.witness_failures
                << " bound_violations=" << summary.bound_violations
                << " equality_failures=" << summary.equality_failures
                << " max_gap=" << summary.max_heuristic_gap << "\n";
      if (!summary.ok()) {
        std::cerr << "oracle-check FAILED\n";
        return 1;
      }
      std::cout << "oracle-check OK\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
