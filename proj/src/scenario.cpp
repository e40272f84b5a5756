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

#include "greenmig/scenario.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "greenmig/rng.hpp"

namespace greenmig {

namespace {

constexpr std::uint64_t kInstanceTag = 0x494e5354;    // instance draws
constexpr std::uint64_t kBackgroundTag = 0x42474e44;  // background traffic

std::uint64_t instance_seed(const ScenarioConfig& cfg, int replication) {
  return derive_seed(cfg.base_seed, kInstanceTag,
                     static_cast<std::uint64_t>(replication));
}

std::uint64_t background_seed(const ScenarioConfig& cfg, int replication,
                              double erlangs) {
  return derive_seed(cfg.base_seed, kBackgroundTag,
                     splitmix64(static_cast<std::uint64_t>(replication)) ^
                         std::bit_cast<std::uint64_t>(erlangs));
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

Graph config_graph(const ScenarioConfig& cfg) {
  return cfg.topology_path.empty() ? build_nsfnet()
                                   : load_topology(cfg.topology_path);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("config: parse error in " + path + ": " +
                             e.what());
  }
  ScenarioConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "topology") cfg.topology_path = value.get<std::string>();
      else if (key == "dc_nodes") cfg.dc_nodes = value.get<std::vector<int>>();
      else if (key == "servers_per_dc") cfg.servers_per_dc = value.get<int>();
      else if (key == "vms_per_server") cfg.vms_per_server = value.get<int>();
      else if (key == "prices") cfg.prices = value.get<std::vector<double>>();
      else if (key == "vm_count_min") cfg.vm_count_min = value.get<int>();
      else if (key == "vm_count_max") cfg.vm_count_max = value.get<int>();
      else if (key == "renewable_min") cfg.renewable_min = value.get<double>();
      else if (key == "renewable_max") cfg.renewable_max = value.get<double>();
      else if (key == "server_power") cfg.server_power = value.get<double>();
      else if (key == "pue") cfg.pue = value.get<double>();
      else if (key == "bandwidth_min") cfg.bandwidth_min = value.get<double>();
      else if (key == "bandwidth_max") cfg.bandwidth_max = value.get<double>();
      else if (key == "background_bandwidth_min")
        cfg.background_bandwidth_min = value.get<double>();
      else if (key == "background_bandwidth_max")
        cfg.background_bandwidth_max = value.get<double>();
      else if (key == "slots_per_link") cfg.slots_per_link = value.get<int>();
      else if (key == "slot_capacity") cfg.slot_capacity = value.get<double>();
      else if (key == "granularity_sweep")
        cfg.granularity_sweep = value.get<std::vector<int>>();
      else if (key == "erlangs_sweep")
        cfg.erlangs_sweep = value.get<std::vector<double>>();
      else if (key == "k_paths") cfg.k_paths = value.get<int>();
      else if (key == "max_congestion")
        cfg.max_congestion = value.get<double>();
      else if (key == "replications") cfg.replications = value.get<int>();
      else if (key == "base_seed") cfg.base_seed = value.get<std::uint64_t>();
      else if (key == "max_resample") cfg.max_resample = value.get<int>();
      else if (key == "threads") cfg.threads = value.get<int>();
      else throw std::runtime_error("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config: bad value type: " +
                             std::string(e.what()));
  }
  return cfg;
}

void validate_config(const ScenarioConfig& cfg, const Graph& g) {
  if (cfg.dc_nodes.empty()) throw std::invalid_argument("config: no DC nodes");
  std::set<NodeId> uniq(cfg.dc_nodes.begin(), cfg.dc_nodes.end());
  if (uniq.size() != cfg.dc_nodes.size()) {
    throw std::invalid_argument("config: duplicate DC nodes");
  }
  for (NodeId n : cfg.dc_nodes) {
    if (n < 1 || n > g.node_count()) {
      throw std::invalid_argument("config: DC node " + std::to_string(n) +
                                  " not in topology");
    }
  }
  if (cfg.prices.size() != cfg.dc_nodes.size()) {
    throw std::invalid_argument("config: prices must match dc_nodes");
  }
  for (double p : cfg.prices) {
    if (p <= 0) throw std::invalid_argument("config: price must be positive");
  }
  if (cfg.servers_per_dc < 1 || cfg.vms_per_server < 1) {
    throw std::invalid_argument("config: capacity parameters must be >= 1");
  }
  if (cfg.vm_count_min < 0 || cfg.vm_count_max < cfg.vm_count_min) {
    throw std::invalid_argument("config: bad VM count range");
  }
  if (cfg.vm_count_max > cfg.servers_per_dc * cfg.vms_per_server) {
    throw std::invalid_argument("config: VM count range exceeds DC capacity");
  }
  if (cfg.renewable_min < 0 || cfg.renewable_max < cfg.renewable_min) {
    throw std::invalid_argument("config: bad renewable range");
  }
  if (cfg.server_power <= 0 || cfg.pue < 1.0) {
    throw std::invalid_argument("config: bad energy parameters");
  }
  if (cfg.bandwidth_min <= 0 || cfg.bandwidth_max < cfg.bandwidth_min) {
    throw std::invalid_argument("config: bad bandwidth range");
  }
  if (cfg.background_bandwidth_min <= 0 ||
      cfg.background_bandwidth_max < cfg.background_bandwidth_min) {
    throw std::invalid_argument("config: bad background bandwidth range");
  }
  if (cfg.slots_per_link < 1 || cfg.slot_capacity <= 0) {
    throw std::invalid_argument("config: bad spectrum parameters");
  }
  for (int k : cfg.granularity_sweep) {
    if (k < 1) throw std::invalid_argument("config: granularity must be >= 1");
  }
  for (double e : cfg.erlangs_sweep) {
    if (e < 0) throw std::invalid_argument("config: negative load");
  }
  if (cfg.k_paths < 1) throw std::invalid_argument("config: k_paths < 1");
  if (cfg.max_congestion <= 0 || cfg.max_congestion > 1) {
    throw std::invalid_argument("config: max_congestion outside (0, 1]");
  }
  if (cfg.replications < 0) {
    throw std::invalid_argument("config: negative replications");
  }
  if (cfg.max_resample < 1) {
    throw std::invalid_argument("config: max_resample < 1");
  }
}

Instance draw_instance(const ScenarioConfig& cfg, int replication) {
  Rng rng(instance_seed(cfg, replication));
  for (int attempt = 0; attempt < cfg.max_resample; ++attempt) {
    std::vector<Datacenter> dcs;
    dcs.reserve(cfg.dc_nodes.size());
    for (std::size_t i = 0; i < cfg.dc_nodes.size(); ++i) {
      Datacenter dc;
      dc.node = cfg.dc_nodes[i];
      dc.servers = cfg.servers_per_dc;
      dc.vms_per_server = cfg.vms_per_server;
      dc.price = cfg.prices[i];
      dc.hosted = rng.uniform_int(cfg.vm_count_min, cfg.vm_count_max);
      dc.renewable = rng.uniform(cfg.renewable_min, cfg.renewable_max);
      dc.vm_bandwidths.reserve(dc.hosted);
      for (int v = 0; v < dc.hosted; ++v) {
        dc.vm_bandwidths.push_back(
            rng.uniform(cfg.bandwidth_min, cfg.bandwidth_max));
      }
      dcs.push_back(std::move(dc));
    }
    WorkloadTarget target = optimal_distribution(dcs, cfg.energy());
    const Classification cls = classify(dcs, target);
    if (!cls.sources.empty() && !cls.destinations.empty()) {
      return Instance{std::move(dcs), std::move(target), attempt};
    }
  }
  throw std::runtime_error(
      "draw_instance: no scenario with both deficit and surplus DCs after " +
      std::to_string(cfg.max_resample) + " draws");
}

namespace {

std::vector<RunResult> run_cell(const ScenarioConfig& cfg, const Graph& g,
                                const RoutingTable& routes, int replication,
                                double erlangs, int granularity,
                                const Instance& instance,
                                const SlotMap& background_slots,
                                const BackgroundSummary& bg,
                                const std::vector<std::string>& algorithms,
                                ScenarioRun* logs_out) {
  const EnergyParams energy = cfg.energy();
  const double cost_no_migration = total_cost(instance.dcs, energy);
  std::vector<RunResult> rows;
  for (const auto& name : algorithms) {
    const Algorithm kind = algorithm_from_name(name);
    ScenarioState state{&g,           &routes,
                        background_slots,  // copy: identical starting spectrum
                        instance.dcs, energy,
                        instance.target, cfg.slot_capacity};
    HeuristicConfig hcfg{kind, granularity, cfg.k_paths, cfg.max_congestion};
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<MigrationRecord> records = kind == Algorithm::kSpr
                                               ? run_spr(state, hcfg)
                                               : run_lpr(state, hcfg);
    const auto t1 = std::chrono::steady_clock::now();

    RunResult r;
    r.replication = replication;
    r.seed = instance_seed(cfg, replication);
    r.erlangs = erlangs;
    r.granularity = granularity;
    r.algorithm = name;
    r.cost_no_migration = cost_no_migration;
    r.cost_after = total_cost(state.dcs, energy);
    for (const auto& rec : records) {
      if (rec.accepted) {
        ++r.accepted;
        r.vms_migrated += static_cast<int>(rec.group.bandwidths.size());
      } else {
        ++r.rejected;
      }
    }
    r.background_offered = bg.offered;
    r.background_placed = bg.placed;
    r.background_dropped = bg.dropped;
    r.wall_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    rows.push_back(std::move(r));
    if (logs_out) logs_out->logs[name] = std::move(records);
  }
  return rows;
}

}  // namespace

ScenarioRun run_scenario(const ScenarioConfig& cfg, const Graph& g,
                         const RoutingTable& routes, int replication,
                         double erlangs, int granularity,
                         const std::vector<std::string>& algorithms,
                         bool keep_logs) {
  Instance instance = draw_instance(cfg, replication);
  SlotMap slots(g.link_count(), cfg.slots_per_link);
  LoadSpec spec{erlangs, cfg.background_bandwidth_min,
                cfg.background_bandwidth_max,
                background_seed(cfg, replication, erlangs)};
  BackgroundSummary bg =
      steady_state_background(g, routes, slots, spec, cfg.slot_capacity);

  ScenarioRun run{{}, {}, instance.dcs, slots};
  run.results = run_cell(cfg, g, routes, replication, erlangs, granularity,
                         instance, slots, bg, algorithms,
                         keep_logs ? &run : nullptr);
  return run;
}

std::vector<RunResult> sweep(const ScenarioConfig& cfg,
                             const std::vector<std::string>& algorithms) {
  const Graph g = config_graph(cfg);
  validate_config(cfg, g);
  const RoutingTable routes(g, cfg.dc_nodes, cfg.k_paths);

  std::vector<std::vector<RunResult>> per_rep(cfg.replications);
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      const int rep = next.fetch_add(1);
      if (rep >= cfg.replications || failed.load()) break;
      try {
        std::vector<RunResult> rows;
        const Instance instance = draw_instance(cfg, rep);
        for (double erlangs : cfg.erlangs_sweep) {
          SlotMap slots(g.link_count(), cfg.slots_per_link);
          LoadSpec spec{erlangs, cfg.background_bandwidth_min,
                        cfg.background_bandwidth_max,
                        background_seed(cfg, rep, erlangs)};
          BackgroundSummary bg = steady_state_background(g, routes, slots,
                                                         spec,
                                                         cfg.slot_capacity);
          for (int granularity : cfg.granularity_sweep) {
            auto cell = run_cell(cfg, g, routes, rep, erlangs, granularity,
                                 instance, slots, bg, algorithms, nullptr);
            rows.insert(rows.end(), std::make_move_iterator(cell.begin()),
                        std::make_move_iterator(cell.end()));
          }
        }
        per_rep[rep] = std::move(rows);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  int thread_count = cfg.threads > 0
                         ? cfg.threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  thread_count = std::max(1, std::min(thread_count, cfg.replications));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<RunResult> rows;
  for (auto& rep_rows : per_rep) {
    rows.insert(rows.end(), std::make_move_iterator(rep_rows.begin()),
                std::make_move_iterator(rep_rows.end()));
  }
  return rows;
}

std::vector<AggregateCell> aggregate(const std::vector<RunResult>& rows) {
  struct Acc {
    int n = 0;
    double no_sum = 0, no_sq = 0;
    double after_sum = 0, after_sq = 0;
    double saving_sum = 0, saving_sq = 0;
    double accepted = 0, rejected = 0, vms = 0, dropped = 0, wall = 0;
  };
  std::map<std::tuple<double, int, std::string>, Acc> cells;
  for (const auto& r : rows) {
    Acc& a = cells[{r.erlangs, r.granularity, r.algorithm}];
    ++a.n;
    a.no_sum += r.cost_no_migration;
    a.no_sq += r.cost_no_migration * r.cost_no_migration;
    a.after_sum += r.cost_after;
    a.after_sq += r.cost_after * r.cost_after;
    const double s = r.saving();
    a.saving_sum += s;
    a.saving_sq += s * s;
    a.accepted += r.accepted;
    a.rejected += r.rejected;
    a.vms += r.vms_migrated;
    a.dropped += r.background_dropped;
    a.wall += r.wall_ms;
  }
  auto stderr_of = [](double sum, double sq, int n) {
    if (n < 2) return 0.0;
    const double mean = sum / n;
    const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1));
    return std::sqrt(var / n);
  };
  std::vector<AggregateCell> out;
  for (const auto& [key, a] : cells) {
    AggregateCell c;
    std::tie(c.erlangs, c.granularity, c.algorithm) = key;
    c.runs = a.n;
    c.mean_cost_no_migration = a.no_sum / a.n;
    c.stderr_cost_no_migration = stderr_of(a.no_sum, a.no_sq, a.n);
    c.mean_cost_after = a.after_sum / a.n;
    c.stderr_cost_after = stderr_of(a.after_sum, a.after_sq, a.n);
    c.mean_saving = a.saving_sum / a.n;
    c.stderr_saving = stderr_of(a.saving_sum, a.saving_sq, a.n);
    c.saving_of_means = a.no_sum > 0 ? 1.0 - a.after_sum / a.no_sum : 0.0;
    c.mean_accepted = a.accepted / a.n;
    c.mean_rejected = a.rejected / a.n;
    c.mean_vms_migrated = a.vms / a.n;
    c.mean_background_dropped = a.dropped / a.n;
    c.mean_wall_ms = a.wall / a.n;
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);  // LF endings everywhere
  if (!out) throw std::runtime_error("emit: cannot write " + p.string());
  return out;
}

// Pivot of one aggregate metric: rows by load, one column per granularity.
void write_by_granularity(const std::filesystem::path& file,
                          const std::vector<AggregateCell>& cells,
                          const std::string& algorithm, bool runtime) {
  std::set<double> loads;
  std::set<int> kappas;
  for (const auto& c : cells) {
    if (c.algorithm != algorithm) continue;
    loads.insert(c.erlangs);
    kappas.insert(c.granularity);
  }
  auto out = open_out(file);
  out << "erlangs";
  for (int k : kappas) out << ",granularity_" << k;
  out << '\n';
  for (double e : loads) {
    out << fmt_double(e);
    for (int k : kappas) {
      out << ',';
      for (const auto& c : cells) {
        if (c.algorithm == algorithm && c.erlangs == e && c.granularity == k) {
          out << fmt_double(runtime ? c.mean_wall_ms : c.mean_cost_after);
          break;
        }
      }
    }
    out << '\n';
  }
}

}  // namespace

std::vector<std::string> deterministic_output_files() {
  return {"results.csv", "aggregate.csv", "plot_cost_comparison.csv",
          "plot_spr_cost_by_granularity.csv",
          "plot_lpr_cost_by_granularity.csv"};
}

void emit(const std::vector<RunResult>& rows, const ScenarioConfig& cfg,
          const std::string& format, const std::string& out_dir) {
  if (format != "csv") {
    throw std::invalid_argument("emit: unknown format '" + format + "'");
  }
  (void)cfg;
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  {
    auto out = open_out(dir / "results.csv");
    out << "replication,seed,erlangs,granularity,algorithm,"
           "cost_no_migration,cost_after,saving,accepted,rejected,"
           "vms_migrated,background_offered,background_placed,"
           "background_dropped\n";
    for (const auto& r : rows) {
      out << r.replication << ',' << r.seed << ',' << fmt_double(r.erlangs)
          << ',' << r.granularity << ',' << r.algorithm << ','
          << fmt_double(r.cost_no_migration) << ',' << fmt_double(r.cost_after)
          << ',' << fmt_double(r.saving()) << ',' << r.accepted << ','
          << r.rejected << ',' << r.vms_migrated << ','
          << r.background_offered << ',' << r.background_placed << ','
          << r.background_dropped << '\n';
    }
  }
  {
    auto out = open_out(dir / "timings.csv");
    out << "replication,erlangs,granularity,algorithm,wall_ms\n";
    for (const auto& r : rows) {
      out << r.replication << ',' << fmt_double(r.erlangs) << ','
          << r.granularity << ',' << r.algorithm << ','
          << fmt_double(r.wall_ms) << '\n';
    }
  }

  const auto cells = aggregate(rows);
  {
    auto out = open_out(dir / "aggregate.csv");
    out << "erlangs,granularity,algorithm,runs,mean_cost_no_migration,"
           "stderr_cost_no_migration,mean_cost_after,stderr_cost_after,"
           "mean_saving,stderr_saving,saving_of_means,mean_accepted,"
           "mean_rejected,mean_vms_migrated,mean_background_dropped\n";
    for (const auto& c : cells) {
      out << fmt_double(c.erlangs) << ',' << c.granularity << ','
          << c.algorithm << ',' << c.runs << ','
          << fmt_double(c.mean_cost_no_migration) << ','
          << fmt_double(c.stderr_cost_no_migration) << ','
          << fmt_double(c.mean_cost_after) << ','
          << fmt_double(c.stderr_cost_after) << ','
          << fmt_double(c.mean_saving) << ',' << fmt_double(c.stderr_saving)
          << ',' << fmt_double(c.saving_of_means) << ','
          << fmt_double(c.mean_accepted) << ',' << fmt_double(c.mean_rejected)
          << ',' << fmt_double(c.mean_vms_migrated) << ','
          << fmt_double(c.mean_background_dropped) << '\n';
    }
  }

  // Figure-style tables at the smallest granularity in the data.
  std::set<int> kappas;
  std::set<double> loads;
  std::set<std::string> algorithms;
  for (const auto& c : cells) {
    kappas.insert(c.granularity);
    loads.insert(c.erlangs);
    algorithms.insert(c.algorithm);
  }
  const int k0 = kappas.empty() ? 0 : *kappas.begin();
  {
    auto out = open_out(dir / "plot_cost_comparison.csv");
    out << "erlangs,no_migration";
    for (const auto& a : algorithms) out << ',' << a;
    out << '\n';
    for (double e : loads) {
      out << fmt_double(e) << ',';
      for (const auto& c : cells) {
        if (c.erlangs == e && c.granularity == k0) {
          out << fmt_double(c.mean_cost_no_migration);
          break;
        }
      }
      for (const auto& a : algorithms) {
        out << ',';
        for (const auto& c : cells) {
          if (c.erlangs == e && c.granularity == k0 && c.algorithm == a) {
            out << fmt_double(c.mean_cost_after);
            break;
          }
        }
      }
      out << '\n';
    }
  }
  {
    auto out = open_out(dir / "plot_runtime_comparison.csv");
    out << "erlangs";
    for (const auto& a : algorithms) out << ',' << a << "_ms";
    out << '\n';
    for (double e : loads) {
      out << fmt_double(e);
      for (const auto& a : algorithms) {
        out << ',';
        for (const auto& c : cells) {
          if (c.erlangs == e && c.granularity == k0 && c.algorithm == a) {
            out << fmt_double(c.mean_wall_ms);
            break;
          }
        }
      }
      out << '\n';
    }
  }
  for (const auto& a : algorithms) {
    write_by_granularity(dir / ("plot_" + a + "_cost_by_granularity.csv"),
                         cells, a, /*runtime=*/false);
    write_by_granularity(dir / ("plot_" + a + "_runtime_by_granularity.csv"),
                         cells, a, /*runtime=*/true);
  }
}

OracleCheckSummary run_oracle_check(const OracleCheckConfig& cfg) {
  OracleCheckSummary summary;

  auto run_heuristic = [&](const TinyInstance& inst,
                           const RoutingTable& routes,
                           const WorkloadTarget& target, Algorithm kind,
                           std::vector<MigrationRecord>& records) {
    ScenarioState state{&inst.graph,
                        &routes,
                        SlotMap(inst.graph.link_count(), inst.slots_per_link),
                        inst.dcs,
                        inst.energy,
                        target,
                        inst.slot_capacity};
    for (const auto& a : inst.background) state.slots.allocate(a);
    HeuristicConfig hcfg{kind, inst.granularity, cfg.k_paths,
                         inst.max_congestion};
    records = kind == Algorithm::kSpr ? run_spr(state, hcfg)
                                      : run_lpr(state, hcfg);
    return total_cost(state.dcs, inst.energy);
  };

  auto check_instance = [&](const TinyInstance& inst, bool expect_equal) {
    OracleSolution oracle = solve_exact(inst);  // CapExceeded handled by caller

    // The oracle's own witness must satisfy every constraint when replayed
    // through the independent validator in its admission order.
    {
      std::vector<int> final_counts;
      for (const auto& dc : inst.dcs) final_counts.push_back(dc.hosted);
      std::vector<MigrationRecord> records;
      for (const auto& pm : oracle.witness) {
        final_counts[pm.source_dc] -=
            static_cast<int>(pm.bandwidths.size());
        final_counts[pm.dest_dc] += static_cast<int>(pm.bandwidths.size());
        MigrationRecord rec;
        rec.round = static_cast<int>(records.size());
        rec.group.source_dc = pm.source_dc;
        rec.group.dest_dc = pm.dest_dc;
        rec.group.bandwidths = pm.bandwidths;
        for (double b : pm.bandwidths) rec.group.total_bandwidth += b;
        rec.group.width = pm.width;
        rec.path = pm.path;
        rec.start_slot = pm.start_slot;
        rec.accepted = true;
        records.push_back(std::move(rec));
      }
      PlanCheckInput plan{&inst.graph,         inst.slots_per_link,
                          inst.slot_capacity,  inst.dcs,
                          WorkloadTarget{final_counts}, inst.granularity,
                          inst.max_congestion, inst.background,
                          records};
      if (!check_feasible(plan).ok) ++summary.witness_failures;
    }

    std::vector<NodeId> dc_nodes;
    for (const auto& dc : inst.dcs) dc_nodes.push_back(dc.node);
    const RoutingTable routes(inst.graph, dc_nodes, cfg.k_paths);
    const WorkloadTarget target = optimal_distribution(inst.dcs, inst.energy);

    for (Algorithm kind : {Algorithm::kSpr, Algorithm::kLpr}) {
      std::vector<MigrationRecord> records;
      const double cost = run_heuristic(inst, routes, target, kind, records);

      PlanCheckInput plan{&inst.graph,      inst.slots_per_link,
                          inst.slot_capacity, inst.dcs,
                          target,           inst.granularity,
                          inst.max_congestion, inst.background,
                          records};
      const FeasibilityReport report = check_feasible(plan);
      ++summary.plans_checked;
      if (!report.ok) ++summary.feasibility_failures;

      if (cost < oracle.cost - 1e-9) ++summary.bound_violations;
      summary.max_heuristic_gap =
          std::max(summary.max_heuristic_gap, cost - oracle.cost);
      if (expect_equal && std::abs(cost - oracle.cost) > 1e-9) {
        ++summary.equality_failures;
      }
    }
  };

  int produced = 0, attempts = 0;
  while (produced < cfg.instances && attempts < cfg.instances * 20) {
    Rng rng(derive_seed(cfg.seed, 0x54494e59, attempts));
    ++attempts;
    try {
      const TinyInstance inst = random_tiny_instance(rng, TinyFamilyOptions{});
      check_instance(inst, /*expect_equal=*/false);
      ++produced;
      ++summary.instances;
    } catch (const CapExceededError&) {
      ++summary.cap_exceeded;
    }
  }

  produced = 0;
  attempts = 0;
  while (produced < cfg.subfamily_instances &&
         attempts < cfg.subfamily_instances * 20) {
    Rng rng(derive_seed(cfg.seed, 0x45515543, attempts));
    ++attempts;
    try {
      TinyFamilyOptions opts;
      opts.single_pair_uncongested = true;
      const TinyInstance inst = random_tiny_instance(rng, opts);
      check_instance(inst, /*expect_equal=*/true);
      ++produced;
      ++summary.subfamily;
    } catch (const CapExceededError&) {
      ++summary.cap_exceeded;
    }
  }
  return summary;
}

}  // namespace greenmig
