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

#include "greenmig/manycast.hpp"

#include <algorithm>
#include <ostream>
#include <tuple>

namespace greenmig {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kSpr:
      return "spr";
    case Algorithm::kLpr:
      return "lpr";
  }
  throw std::invalid_argument("algorithm_name: bad enum value");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "spr") return Algorithm::kSpr;
  if (name == "lpr") return Algorithm::kLpr;
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (expected spr or lpr)");
}

namespace {

MigrationGroup pack_prefix(std::span<const double> pending, int granularity,
                           double slot_capacity, int max_vms) {
  if (granularity < 1) throw std::invalid_argument("granularity < 1");
  if (pending.empty()) throw std::invalid_argument("build_group: no demand");
  if (max_vms < 1) throw std::invalid_argument("build_group: max_vms < 1");
  MigrationGroup group;
  double sum = 0.0;
  for (double bw : pending) {
    if (static_cast<int>(group.bandwidths.size()) >= max_vms) break;
    const int width = slots_needed(sum + bw, slot_capacity);
    if (width > granularity) break;
    group.bandwidths.push_back(bw);
    sum += bw;
  }
  if (group.bandwidths.empty()) {
    throw VmTooWideError("VM of " + std::to_string(pending.front()) +
                         " Gb/s needs more than the granularity cap of " +
                         std::to_string(granularity) + " slots");
  }
  group.total_bandwidth = sum;
  group.width = slots_needed(sum, slot_capacity);
  return group;
}

// Bookkeeping for one heuristic run. Loads and the per-source consumed
// prefix evolve per round; the datacenter VM lists are reconciled once at
// the end of the run.
struct Engine {
  ScenarioState& state;
  const HeuristicConfig& cfg;
  MigrationDemand demand;
  std::vector<int> consumed;    // per dc: shed entries already migrated
  std::vector<int> absorb_gap;  // per dc: VMs it may still take
  std::vector<int> load;        // per dc: current VM count
  std::int64_t next_owner = 1'000'000'000;

  explicit Engine(ScenarioState& s, const HeuristicConfig& c)
      : state(s), cfg(c), demand(demand_from_gap(s.dcs, s.target)) {
    const int n = static_cast<int>(s.dcs.size());
    consumed.assign(n, 0);
    absorb_gap.assign(n, 0);
    load.resize(n);
    for (int m = 0; m < n; ++m) {
      load[m] = s.dcs[m].hosted;
      absorb_gap[m] = std::max(0, s.target.vm_count[m] - s.dcs[m].hosted);
    }
  }

  int pending(int m) const {
    return static_cast<int>(demand.shed[m].size()) - consumed[m];
  }

  bool sources_left() const {
    for (std::size_t m = 0; m < demand.shed.size(); ++m) {
      if (pending(int(m)) > 0) return true;
    }
    return false;
  }

  bool destinations_left() const {
    return std::any_of(absorb_gap.begin(), absorb_gap.end(),
                       [](int g) { return g > 0; });
  }

  // Source with the most VMs still to shed; ties to the lower node id.
  int pick_source() const {
    int best = -1;
    for (std::size_t m = 0; m < demand.shed.size(); ++m) {
      if (pending(int(m)) <= 0) continue;
      if (best < 0 || pending(int(m)) > pending(best) ||
          (pending(int(m)) == pending(best) &&
           state.dcs[m].node < state.dcs[best].node)) {
        best = int(m);
      }
    }
    return best;
  }

  double headroom(int m) const {
    const int on =
        active_servers(load[m], state.dcs[m].vms_per_server);
    return std::max(0.0, state.dcs[m].renewable -
                             state.energy.pue * state.energy.server_power * on);
  }

  // Destination with the most renewable headroom at its current load; ties
  // to the lower node id.
  int pick_destination() const {
    int best = -1;
    double best_avail = 0.0;
    for (std::size_t m = 0; m < absorb_gap.size(); ++m) {
      if (absorb_gap[m] <= 0) continue;
      const double avail = headroom(int(m));
      if (best < 0 || avail > best_avail ||
          (avail == best_avail && state.dcs[m].node < state.dcs[best].node)) {
        best = int(m);
        best_avail = avail;
      }
    }
    return best;
  }

  MigrationGroup make_group(int src, int dst) {
    std::span<const double> left(demand.shed[src].data() + consumed[src],
                                 static_cast<std::size_t>(pending(src)));
    MigrationGroup g = pack_prefix(left, cfg.granularity, state.slot_capacity,
                                   absorb_gap[dst]);
    g.source_dc = src;
    g.dest_dc = dst;
    return g;
  }

  void admit(const MigrationGroup& g, const Path& path, int start) {
    state.slots.allocate(
        SpectrumAllocation{path, start, g.width, next_owner++});
    const int moved = static_cast<int>(g.bandwidths.size());
    consumed[g.source_dc] += moved;
    load[g.source_dc] -= moved;
    load[g.dest_dc] += moved;
    absorb_gap[g.dest_dc] -= moved;
    auto& dest_list = state.dcs[g.dest_dc].vm_bandwidths;
    dest_list.insert(dest_list.end(), g.bandwidths.begin(),
                     g.bandwidths.end());
  }

  // Write the evolved loads back into the datacenter records so their
  // invariants hold again at exit.
  void finalize() {
    for (std::size_t m = 0; m < demand.shed.size(); ++m) {
      if (consumed[m] > 0) {
        auto& list = state.dcs[m].vm_bandwidths;
        std::sort(list.begin(), list.end());
        list.erase(list.begin(), list.begin() + consumed[m]);
      }
      state.dcs[m].hosted = load[m];
    }
  }
};

}  // namespace

MigrationGroup build_group(const MigrationDemand& demand, int source_dc,
                           int granularity, double slot_capacity,
                           int max_vms) {
  if (source_dc < 0 || source_dc >= static_cast<int>(demand.shed.size())) {
    throw std::invalid_argument("build_group: bad source index");
  }
  MigrationGroup g = pack_prefix(demand.shed[source_dc], granularity,
                                 slot_capacity, max_vms);
  g.source_dc = source_dc;
  return g;
}

std::vector<MigrationRecord> run_spr(ScenarioState& state,
                                     const HeuristicConfig& cfg) {
  Engine engine(state, cfg);
  std::vector<MigrationRecord> records;
  int round = 0;
  while (engine.sources_left() && engine.destinations_left()) {
    const int src = engine.pick_source();
    const int dst = engine.pick_destination();
    const Path path = state.routes->shortest_path(state.dcs[src].node,
                                                  state.dcs[dst].node);
    MigrationRecord rec;
    rec.round = round;
    try {
      rec.group = engine.make_group(src, dst);
    } catch (const VmTooWideError&) {
      break;  // no non-empty group can be formed; give up like a rejection
    }
    rec.path = path;
    rec.congestion_before = state.slots.path_congestion(path);
    if (state.slots.admissible(path, rec.group.width, cfg.max_congestion)) {
      rec.start_slot = *state.slots.first_fit(path, rec.group.width);
      rec.accepted = true;
      engine.admit(rec.group, path, *rec.start_slot);
      records.push_back(std::move(rec));
    } else {
      rec.accepted = false;
      records.push_back(std::move(rec));
      break;
    }
    ++round;
  }
  engine.finalize();
  return records;
}

std::vector<MigrationRecord> run_lpr(ScenarioState& state,
                                     const HeuristicConfig& cfg) {
  Engine engine(state, cfg);
  std::vector<MigrationRecord> records;
  // scan in ascending node-id order so ties resolve deterministically
  std::vector<int> by_node(state.dcs.size());
  for (std::size_t i = 0; i < by_node.size(); ++i) by_node[i] = int(i);
  std::sort(by_node.begin(), by_node.end(), [&](int a, int b) {
    return state.dcs[a].node < state.dcs[b].node;
  });
  int round = 0;
  while (engine.sources_left() && engine.destinations_left()) {
    // Global scan: fewest busy slots wins; ties fall through to hop count,
    // then the (source, destination, node sequence) scan order.
    int best_src = -1, best_dst = -1;
    const Path* best_path = nullptr;
    std::pair<int, int> best_key{0, 0};  // (busy slots, hops)
    for (int s : by_node) {
      if (engine.pending(s) <= 0) continue;
      for (int d : by_node) {
        if (engine.absorb_gap[d] <= 0) continue;
        for (const Path& p :
             state.routes->k_paths(state.dcs[s].node, state.dcs[d].node)) {
          const std::pair<int, int> key{state.slots.path_occupied_count(p),
                                        p.hops()};
          if (best_path == nullptr || key < best_key) {
            best_src = s;
            best_dst = d;
            best_path = &p;
            best_key = key;
          }
        }
      }
    }
    if (best_path == nullptr) break;

    MigrationRecord rec;
    rec.round = round;
    try {
      rec.group = engine.make_group(best_src, best_dst);
    } catch (const VmTooWideError&) {
      break;
    }
    rec.path = *best_path;
    rec.congestion_before = state.slots.path_congestion(*best_path);
    if (state.slots.admissible(*best_path, rec.group.width,
                               cfg.max_congestion)) {
      rec.start_slot = *state.slots.first_fit(*best_path, rec.group.width);
      rec.accepted = true;
      engine.admit(rec.group, *best_path, *rec.start_slot);
      records.push_back(std::move(rec));
    } else {
      rec.accepted = false;
      records.push_back(std::move(rec));
      break;
    }
    ++round;
  }
  engine.finalize();
  return records;
}

void write_migration_log_csv(std::ostream& out,
                             std::span<const Datacenter> dcs,
                             std::span<const MigrationRecord> records) {
  out << "round,source_node,dest_node,vms,total_bandwidth_gbps,width,"
         "path_nodes,start_slot,congestion_before,accepted\n";
  for (const auto& rec : records) {
    out << rec.round << ',' << dcs[rec.group.source_dc].node << ','
        << dcs[rec.group.dest_dc].node << ',' << rec.group.bandwidths.size()
        << ',' << rec.group.total_bandwidth << ',' << rec.group.width << ',';
    if (rec.path) {
      const auto& nodes = rec.path->nodes();
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) out << '-';
        out << nodes[i];
      }
    }
    out << ',';
    if (rec.start_slot) out << *rec.start_slot;
    out << ',' << rec.congestion_before << ',' << (rec.accepted ? 1 : 0)
        << '\n';
  }
}

}  // namespace greenmig
