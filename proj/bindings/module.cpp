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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "greenmig/oracle.hpp"
#include "greenmig/rng.hpp"
#include "greenmig/scenario.hpp"

namespace py = pybind11;
using namespace greenmig;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Renewable-aware inter-datacenter VM migration over an elastic "
            "optical network: topology, spectrum, energy, traffic, the two "
            "manycast heuristics, the exact tiny-instance solver and the "
            "experiment harness.";

  // ---- topology ----
  py::class_<Link>(m, "Link")
      .def_readonly("u", &Link::u)
      .def_readonly("v", &Link::v)
      .def_readonly("id", &Link::id);

  py::class_<Graph>(m, "Graph")
      .def(py::init<int, const std::vector<std::pair<NodeId, NodeId>>&>(),
           py::arg("node_count"), py::arg("edges"))
      .def_property_readonly("node_count", &Graph::node_count)
      .def_property_readonly("link_count", &Graph::link_count)
      .def("links", &Graph::links)
      .def("neighbors", &Graph::neighbors, py::arg("node"))
      .def("is_connected", &Graph::is_connected);

  m.def("build_nsfnet", &build_nsfnet);
  m.def("load_topology",
        py::overload_cast<const std::string&>(&load_topology),
        py::arg("path"));

  py::class_<Path>(m, "Path")
      .def(py::init<const Graph&, std::vector<NodeId>>(), py::arg("graph"),
           py::arg("nodes"))
      .def_property_readonly("nodes", &Path::nodes)
      .def_property_readonly("links", &Path::links)
      .def_property_readonly("hops", &Path::hops)
      .def("__eq__", [](const Path& a, const Path& b) { return a == b; })
      .def("__repr__", [](const Path& p) {
        std::string s = "Path(";
        for (std::size_t i = 0; i < p.nodes().size(); ++i) {
          if (i) s += "-";
          s += std::to_string(p.nodes()[i]);
        }
        return s + ")";
      });

  m.def("path_links", &path_links, py::arg("path"));
  m.def("k_shortest_paths", &k_shortest_paths, py::arg("graph"),
        py::arg("source"), py::arg("destination"), py::arg("k"));
  m.def("all_simple_paths", &all_simple_paths, py::arg("graph"),
        py::arg("source"), py::arg("destination"),
        py::arg("max_paths") = 1000000);

  py::class_<RoutingTable>(m, "RoutingTable")
      .def(py::init<const Graph&, const std::vector<NodeId>&, int>(),
           py::arg("graph"), py::arg("endpoints"), py::arg("k"),
           py::keep_alive<1, 2>())
      .def("shortest_path", &RoutingTable::shortest_path, py::arg("source"),
           py::arg("destination"))
      .def("k_paths", &RoutingTable::k_paths, py::arg("source"),
           py::arg("destination"), py::return_value_policy::copy);

  // ---- spectrum ----
  m.def("slots_needed", &slots_needed, py::arg("total_bandwidth_gbps"),
        py::arg("slot_capacity_gbps"));

  py::class_<FreeInterval>(m, "FreeInterval")
      .def_readonly("start", &FreeInterval::start)
      .def_readonly("length", &FreeInterval::length)
      .def("__repr__", [](const FreeInterval& iv) {
        return "(" + std::to_string(iv.start) + "," +
               std::to_string(iv.length) + ")";
      });

  py::class_<SpectrumAllocation>(m, "SpectrumAllocation")
      .def(py::init<const Path&, int, int, std::int64_t>(), py::arg("path"),
           py::arg("start_slot"), py::arg("width"), py::arg("owner"))
      .def_readonly("path", &SpectrumAllocation::path)
      .def_readonly("start_slot", &SpectrumAllocation::start_slot)
      .def_readonly("width", &SpectrumAllocation::width)
      .def_readonly("owner", &SpectrumAllocation::owner);

  py::class_<SlotMap>(m, "SlotMap")
      .def(py::init<int, int>(), py::arg("link_count"),
           py::arg("slots_per_link"))
      .def_property_readonly("link_count", &SlotMap::link_count)
      .def_property_readonly("slots_per_link", &SlotMap::slots_per_link)
      .def("occupied", &SlotMap::occupied, py::arg("link"), py::arg("slot"))
      .def("path_free_intervals", &SlotMap::path_free_intervals,
           py::arg("path"))
      .def("first_fit",
           [](const SlotMap& sm, const Path& p, int width) {
             return sm.first_fit(p, width);
           },
           py::arg("path"), py::arg("width"))
      .def("allocate", &SlotMap::allocate, py::arg("allocation"))
      .def("release", &SlotMap::release, py::arg("owner"))
      .def("path_congestion", &SlotMap::path_congestion, py::arg("path"))
      .def("admissible", &SlotMap::admissible, py::arg("path"),
           py::arg("width"), py::arg("max_ratio"))
      .def("occupied_bits", &SlotMap::occupied_bits)
      .def("all_allocations", &SlotMap::all_allocations)
      .def("dump_occupancy_csv", [](const SlotMap& sm) {
        std::ostringstream out;
        sm.dump_occupancy_csv(out);
        return out.str();
      });

  py::class_<CongestionReport>(m, "CongestionReport")
      .def_readonly("path_ratio", &CongestionReport::path_ratio)
      .def_readonly("per_link", &CongestionReport::per_link);
  m.def("congestion_report", &congestion_report, py::arg("slot_map"),
        py::arg("path"));

  // ---- energy ----
  py::class_<Datacenter>(m, "Datacenter")
      .def(py::init([](NodeId node, int servers, int vms_per_server,
                       int hosted, double renewable, double price,
                       std::vector<double> vm_bandwidths) {
             Datacenter dc{node,  servers, vms_per_server, hosted,
                           renewable, price, std::move(vm_bandwidths)};
             return dc;
           }),
           py::arg("node"), py::arg("servers"), py::arg("vms_per_server"),
           py::arg("hosted"), py::arg("renewable"), py::arg("price"),
           py::arg("vm_bandwidths") = std::vector<double>{})
      .def_readwrite("node", &Datacenter::node)
      .def_readwrite("servers", &Datacenter::servers)
      .def_readwrite("vms_per_server", &Datacenter::vms_per_server)
      .def_readwrite("hosted", &Datacenter::hosted)
      .def_readwrite("renewable", &Datacenter::renewable)
      .def_readwrite("price", &Datacenter::price)
      .def_readwrite("vm_bandwidths", &Datacenter::vm_bandwidths)
      .def_property_readonly("capacity", &Datacenter::capacity);

  py::class_<EnergyParams>(m, "EnergyParams")
      .def(py::init<double, double>(), py::arg("server_power") = 10.0,
           py::arg("pue") = 1.2)
      .def_readwrite("server_power", &EnergyParams::server_power)
      .def_readwrite("pue", &EnergyParams::pue);

  m.def("active_servers", &active_servers, py::arg("hosted"),
        py::arg("vms_per_server"));
  m.def("brown_energy", &brown_energy, py::arg("dc"), py::arg("energy"));
  m.def("available_renewable", &available_renewable, py::arg("dc"),
        py::arg("energy"));
  m.def("total_cost",
        [](const std::vector<Datacenter>& dcs, const EnergyParams& ep) {
          return total_cost(dcs, ep);
        },
        py::arg("dcs"), py::arg("energy"));

  py::class_<WorkloadTarget>(m, "WorkloadTarget")
      .def(py::init([](std::vector<int> counts) {
             return WorkloadTarget{std::move(counts)};
           }),
           py::arg("vm_count"))
      .def_readwrite("vm_count", &WorkloadTarget::vm_count);

  m.def("optimal_distribution",
        [](const std::vector<Datacenter>& dcs, const EnergyParams& ep) {
          return optimal_distribution(dcs, ep);
        },
        py::arg("dcs"), py::arg("energy"));

  py::class_<Classification>(m, "Classification")
      .def_readonly("sources", &Classification::sources)
      .def_readonly("destinations", &Classification::destinations);
  m.def("classify",
        [](const std::vector<Datacenter>& dcs, const WorkloadTarget& t) {
          return classify(dcs, t);
        },
        py::arg("dcs"), py::arg("target"));

  // ---- traffic ----
  py::class_<BackgroundRequest>(m, "BackgroundRequest")
      .def_readonly("id", &BackgroundRequest::id)
      .def_readonly("src", &BackgroundRequest::src)
      .def_readonly("dst", &BackgroundRequest::dst)
      .def_readonly("bandwidth", &BackgroundRequest::bandwidth)
      .def_readonly("arrival", &BackgroundRequest::arrival)
      .def_readonly("holding", &BackgroundRequest::holding);

  py::class_<LoadSpec>(m, "LoadSpec")
      .def(py::init([](double erlangs, double bandwidth_min,
                       double bandwidth_max, std::uint64_t seed) {
             return LoadSpec{erlangs, bandwidth_min, bandwidth_max, seed};
           }),
           py::arg("erlangs"), py::arg("bandwidth_min") = 1.0,
           py::arg("bandwidth_max") = 175.0, py::arg("seed") = 0)
      .def_readwrite("erlangs", &LoadSpec::erlangs)
      .def_readwrite("bandwidth_min", &LoadSpec::bandwidth_min)
      .def_readwrite("bandwidth_max", &LoadSpec::bandwidth_max)
      .def_readwrite("seed", &LoadSpec::seed);

  py::class_<BackgroundSummary>(m, "BackgroundSummary")
      .def_readonly("offered", &BackgroundSummary::offered)
      .def_readonly("placed", &BackgroundSummary::placed)
      .def_readonly("dropped", &BackgroundSummary::dropped)
      .def_readonly("requests", &BackgroundSummary::requests);

  m.def("steady_state_background", &steady_state_background, py::arg("graph"),
        py::arg("routes"), py::arg("slots"), py::arg("spec"),
        py::arg("slot_capacity"));

  py::class_<MigrationDemand>(m, "MigrationDemand")
      .def_readonly("shed", &MigrationDemand::shed)
      .def("total_vms", &MigrationDemand::total_vms);
  m.def("demand_from_gap",
        [](const std::vector<Datacenter>& dcs, const WorkloadTarget& t) {
          return demand_from_gap(dcs, t);
        },
        py::arg("dcs"), py::arg("target"));

  // ---- manycast ----
  py::enum_<Algorithm>(m, "Algorithm")
      .value("SPR", Algorithm::kSpr)
      .value("LPR", Algorithm::kLpr);

  py::class_<HeuristicConfig>(m, "HeuristicConfig")
      .def(py::init([](Algorithm kind, int granularity, int k_paths,
                       double max_congestion) {
             return HeuristicConfig{kind, granularity, k_paths,
                                    max_congestion};
           }),
           py::arg("kind"), py::arg("granularity") = 2,
           py::arg("k_paths") = 3, py::arg("max_congestion") = 1.0)
      .def_readwrite("kind", &HeuristicConfig::kind)
      .def_readwrite("granularity", &HeuristicConfig::granularity)
      .def_readwrite("k_paths", &HeuristicConfig::k_paths)
      .def_readwrite("max_congestion", &HeuristicConfig::max_congestion);

  py::class_<MigrationGroup>(m, "MigrationGroup")
      .def_readonly("source_dc", &MigrationGroup::source_dc)
      .def_readonly("dest_dc", &MigrationGroup::dest_dc)
      .def_readonly("bandwidths", &MigrationGroup::bandwidths)
      .def_readonly("total_bandwidth", &MigrationGroup::total_bandwidth)
      .def_readonly("width", &MigrationGroup::width);

  py::class_<MigrationRecord>(m, "MigrationRecord")
      .def_readonly("round", &MigrationRecord::round)
      .def_readonly("group", &MigrationRecord::group)
      .def_readonly("path", &MigrationRecord::path)
      .def_readonly("start_slot", &MigrationRecord::start_slot)
      .def_readonly("congestion_before", &MigrationRecord::congestion_before)
      .def_readonly("accepted", &MigrationRecord::accepted);

  m.def("build_group", &build_group, py::arg("demand"), py::arg("source_dc"),
        py::arg("granularity"), py::arg("slot_capacity"),
        py::arg("max_vms") = std::numeric_limits<int>::max());

  py::class_<ScenarioState>(m, "ScenarioState")
      .def(py::init([](const Graph& g, const RoutingTable& routes,
                       SlotMap slots, std::vector<Datacenter> dcs,
                       EnergyParams energy, WorkloadTarget target,
                       double slot_capacity) {
             return ScenarioState{&g,
                                  &routes,
                                  std::move(slots),
                                  std::move(dcs),
                                  energy,
                                  std::move(target),
                                  slot_capacity};
           }),
           py::arg("graph"), py::arg("routes"), py::arg("slots"),
           py::arg("dcs"), py::arg("energy"), py::arg("target"),
           py::arg("slot_capacity") = 12.5, py::keep_alive<1, 2>(),
           py::keep_alive<1, 3>())
      .def_readwrite("slots", &ScenarioState::slots)
      .def_readwrite("dcs", &ScenarioState::dcs)
      .def_readwrite("target", &ScenarioState::target)
      .def_readwrite("slot_capacity", &ScenarioState::slot_capacity);

  m.def("run_spr", &run_spr, py::arg("state"), py::arg("config"));
  m.def("run_lpr", &run_lpr, py::arg("state"), py::arg("config"));

  // ---- oracle ----
  py::class_<TinyInstance>(m, "TinyInstance")
      .def(py::init([](Graph g, int slots_per_link, double slot_capacity,
                       std::vector<Datacenter> dcs, EnergyParams energy,
                       int granularity, double max_congestion,
                       std::vector<SpectrumAllocation> background,
                       std::uint64_t state_cap) {
             return TinyInstance{std::move(g),     slots_per_link,
                                 slot_capacity,    std::move(dcs),
                                 energy,           granularity,
                                 max_congestion,   std::move(background),
                                 state_cap};
           }),
           py::arg("graph"), py::arg("slots_per_link"),
           py::arg("slot_capacity"), py::arg("dcs"), py::arg("energy"),
           py::arg("granularity"), py::arg("max_congestion") = 1.0,
           py::arg("background") = std::vector<SpectrumAllocation>{},
           py::arg("state_cap") = 10000000)
      .def_readonly("graph", &TinyInstance::graph)
      .def_readonly("dcs", &TinyInstance::dcs)
      .def_readonly("slots_per_link", &TinyInstance::slots_per_link)
      .def_readonly("granularity", &TinyInstance::granularity)
      .def_readonly("max_congestion", &TinyInstance::max_congestion)
      .def_readonly("background", &TinyInstance::background)
      .def_readonly("energy", &TinyInstance::energy)
      .def_readonly("slot_capacity", &TinyInstance::slot_capacity);

  py::class_<PlannedMigration>(m, "PlannedMigration")
      .def_readonly("source_dc", &PlannedMigration::source_dc)
      .def_readonly("dest_dc", &PlannedMigration::dest_dc)
      .def_readonly("bandwidths", &PlannedMigration::bandwidths)
      .def_readonly("path", &PlannedMigration::path)
      .def_readonly("start_slot", &PlannedMigration::start_slot)
      .def_readonly("width", &PlannedMigration::width);

  py::class_<OracleSolution>(m, "OracleSolution")
      .def_readonly("cost", &OracleSolution::cost)
      .def_readonly("witness", &OracleSolution::witness)
      .def_readonly("states_explored", &OracleSolution::states_explored);

  m.def("solve_exact", &solve_exact, py::arg("instance"));
  m.def("random_tiny_instance",
        [](std::uint64_t seed, bool single_pair_uncongested) {
          Rng rng(seed);
          TinyFamilyOptions opts;
          opts.single_pair_uncongested = single_pair_uncongested;
          return random_tiny_instance(rng, opts);
        },
        py::arg("seed"), py::arg("single_pair_uncongested") = false);

  py::class_<FeasibilityReport>(m, "FeasibilityReport")
      .def_readonly("ok", &FeasibilityReport::ok)
      .def_readonly("violations", &FeasibilityReport::violations);

  m.def("check_feasible",
        [](const Graph& g, int slots_per_link, double slot_capacity,
           std::vector<Datacenter> dcs, WorkloadTarget target,
           int granularity, double max_congestion,
           std::vector<SpectrumAllocation> background,
           std::vector<MigrationRecord> migrations) {
          PlanCheckInput input{&g,
                               slots_per_link,
                               slot_capacity,
                               std::move(dcs),
                               std::move(target),
                               granularity,
                               max_congestion,
                               std::move(background),
                               std::move(migrations)};
          return check_feasible(input);
        },
        py::arg("graph"), py::arg("slots_per_link"), py::arg("slot_capacity"),
        py::arg("dcs"), py::arg("target"), py::arg("granularity"),
        py::arg("max_congestion"), py::arg("background"),
        py::arg("migrations"));

  // ---- harness ----
  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("topology_path", &ScenarioConfig::topology_path)
      .def_readwrite("dc_nodes", &ScenarioConfig::dc_nodes)
      .def_readwrite("servers_per_dc", &ScenarioConfig::servers_per_dc)
      .def_readwrite("vms_per_server", &ScenarioConfig::vms_per_server)
      .def_readwrite("prices", &ScenarioConfig::prices)
      .def_readwrite("vm_count_min", &ScenarioConfig::vm_count_min)
      .def_readwrite("vm_count_max", &ScenarioConfig::vm_count_max)
      .def_readwrite("renewable_min", &ScenarioConfig::renewable_min)
      .def_readwrite("renewable_max", &ScenarioConfig::renewable_max)
      .def_readwrite("server_power", &ScenarioConfig::server_power)
      .def_readwrite("pue", &ScenarioConfig::pue)
      .def_readwrite("bandwidth_min", &ScenarioConfig::bandwidth_min)
      .def_readwrite("bandwidth_max", &ScenarioConfig::bandwidth_max)
      .def_readwrite("background_bandwidth_min",
                     &ScenarioConfig::background_bandwidth_min)
      .def_readwrite("background_bandwidth_max",
                     &ScenarioConfig::background_bandwidth_max)
      .def_readwrite("slots_per_link", &ScenarioConfig::slots_per_link)
      .def_readwrite("slot_capacity", &ScenarioConfig::slot_capacity)
      .def_readwrite("granularity_sweep", &ScenarioConfig::granularity_sweep)
      .def_readwrite("erlangs_sweep", &ScenarioConfig::erlangs_sweep)
      .def_readwrite("k_paths", &ScenarioConfig::k_paths)
      .def_readwrite("max_congestion", &ScenarioConfig::max_congestion)
      .def_readwrite("replications", &ScenarioConfig::replications)
      .def_readwrite("base_seed", &ScenarioConfig::base_seed)
      .def_readwrite("threads", &ScenarioConfig::threads);

  m.def("load_config", &load_config, py::arg("path"));
  m.def("config_graph", &config_graph, py::arg("config"));

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("replication", &RunResult::replication)
      .def_readonly("seed", &RunResult::seed)
      .def_readonly("erlangs", &RunResult::erlangs)
      .def_readonly("granularity", &RunResult::granularity)
      .def_readonly("algorithm", &RunResult::algorithm)
      .def_readonly("cost_no_migration", &RunResult::cost_no_migration)
      .def_readonly("cost_after", &RunResult::cost_after)
      .def_readonly("accepted", &RunResult::accepted)
      .def_readonly("rejected", &RunResult::rejected)
      .def_readonly("vms_migrated", &RunResult::vms_migrated)
      .def_readonly("background_offered", &RunResult::background_offered)
      .def_readonly("background_placed", &RunResult::background_placed)
      .def_readonly("background_dropped", &RunResult::background_dropped)
      .def_readonly("wall_ms", &RunResult::wall_ms)
      .def("saving", &RunResult::saving);

  m.def("run_scenario",
        [](const ScenarioConfig& cfg, int replication, double erlangs,
           int granularity, std::vector<std::string> algorithms) {
          const Graph g = config_graph(cfg);
          validate_config(cfg, g);
          const RoutingTable routes(g, cfg.dc_nodes, cfg.k_paths);
          return run_scenario(cfg, g, routes, replication, erlangs,
                              granularity, algorithms, false)
              .results;
        },
        py::arg("config"), py::arg("replication"), py::arg("erlangs"),
        py::arg("granularity"),
        py::arg("algorithms") = std::vector<std::string>{"spr", "lpr"});

  m.def("sweep", &sweep, py::arg("config"),
        py::arg("algorithms") = std::vector<std::string>{"spr", "lpr"},
        py::call_guard<py::gil_scoped_release>());
  m.def("emit", &emit, py::arg("rows"), py::arg("config"), py::arg("format"),
        py::arg("out_dir"));

  py::class_<AggregateCell>(m, "AggregateCell")
      .def_readonly("erlangs", &AggregateCell::erlangs)
      .def_readonly("granularity", &AggregateCell::granularity)
      .def_readonly("algorithm", &AggregateCell::algorithm)
      .def_readonly("runs", &AggregateCell::runs)
      .def_readonly("mean_cost_no_migration",
                    &AggregateCell::mean_cost_no_migration)
      .def_readonly("mean_cost_after", &AggregateCell::mean_cost_after)
      .def_readonly("mean_saving", &AggregateCell::mean_saving)
      .def_readonly("saving_of_means", &AggregateCell::saving_of_means)
      .def_readonly("mean_wall_ms", &AggregateCell::mean_wall_ms);
  m.def("aggregate", &aggregate, py::arg("rows"));

  py::class_<OracleCheckSummary>(m, "OracleCheckSummary")
      .def_readonly("instances", &OracleCheckSummary::instances)
      .def_readonly("subfamily", &OracleCheckSummary::subfamily)
      .def_readonly("cap_exceeded", &OracleCheckSummary::cap_exceeded)
      .def_readonly("plans_checked", &OracleCheckSummary::plans_checked)
      .def_readonly("feasibility_failures",
                    &OracleCheckSummary::feasibility_failures)
      .def_readonly("witness_failures", &OracleCheckSummary::witness_failures)
      .def_readonly("bound_violations", &OracleCheckSummary::bound_violations)
      .def_readonly("equality_failures",
                    &OracleCheckSummary::equality_failures)
      .def_readonly("max_heuristic_gap",
                    &OracleCheckSummary::max_heuristic_gap)
      .def("ok", &OracleCheckSummary::ok);

  m.def("run_oracle_check",
        [](int instances, int subfamily, std::uint64_t seed) {
          OracleCheckConfig cfg;
          cfg.instances = instances;
          cfg.subfamily_instances = subfamily;
          cfg.seed = seed;
          return run_oracle_check(cfg);
        },
        py::arg("instances") = 200, py::arg("subfamily") = 50,
        py::arg("seed") = 20240101,
        py::call_guard<py::gil_scoped_release>());
}
