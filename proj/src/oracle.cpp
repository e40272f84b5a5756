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

#include "greenmig/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

namespace greenmig {

namespace {

// Occupancy model used by both the solver and the validator: one word
// vector per link, deliberately separate from SlotMap.
struct OccMatrix {
  int links = 0;
  int slots = 0;
  int words = 0;
  std::vector<std::uint64_t> bits;

  OccMatrix(int link_count, int slots_per_link)
      : links(link_count),
        slots(slots_per_link),
        words((slots_per_link + 63) / 64),
        bits(static_cast<std::size_t>(link_count) * words, 0) {}

  std::uint64_t* row(int link) {
    return &bits[static_cast<std::size_t>(link) * words];
  }
  const std::uint64_t* row(int link) const {
    return &bits[static_cast<std::size_t>(link) * words];
  }

  static std::uint64_t chunk_mask(int start, int width, int word) {
    const int lo = word * 64, hi = lo + 64;
    const int a = std::max(start, lo), b = std::min(start + width, hi);
    if (a >= b) return 0;
    std::uint64_t m = ~std::uint64_t{0};
    if (b - lo < 64) m &= (std::uint64_t{1} << (b - lo)) - 1;
    m &= ~((a - lo) ? ((std::uint64_t{1} << (a - lo)) - 1) : 0);
    return m;
  }

  bool interval_free(const std::vector<int>& link_ids, int start,
                     int width) const {
    for (int link : link_ids) {
      for (int w = 0; w < words; ++w) {
        if (row(link)[w] & chunk_mask(start, width, w)) return false;
      }
    }
    return true;
  }

  void fill(const std::vector<int>& link_ids, int start, int width) {
    for (int link : link_ids) {
      for (int w = 0; w < words; ++w) {
        row(link)[w] |= chunk_mask(start, width, w);
      }
    }
  }

  void clear(const std::vector<int>& link_ids, int start, int width) {
    for (int link : link_ids) {
      for (int w = 0; w < words; ++w) {
        row(link)[w] &= ~chunk_mask(start, width, w);
      }
    }
  }

  int union_count(const std::vector<int>& link_ids) const {
    int count = 0;
    for (int w = 0; w < words; ++w) {
      std::uint64_t acc = 0;
      for (int link : link_ids) acc |= row(link)[w];
      count += std::popcount(acc);
    }
    return count;
  }
};

struct Group {
  int source_dc = -1;
  int dest_dc = -1;
  std::vector<double> bandwidths;
  int width = 0;
  // filled during search
  const Path* path = nullptr;
  int start_slot = -1;
};

// Does some admission order keep every group under the congestion
// threshold? Intervals are already pairwise disjoint, so only the ratio
// test depends on the order. Depth-first over orders with failed-set memo;
// the successful order comes back reversed in `order`.
bool admission_order_exists(const std::vector<Group>& groups, OccMatrix& occ,
                            double max_congestion, int admitted_mask,
                            std::set<int>& dead, std::vector<int>& order) {
  const int n = static_cast<int>(groups.size());
  if (admitted_mask == (1 << n) - 1) return true;
  if (dead.count(admitted_mask)) return false;
  for (int i = 0; i < n; ++i) {
    if (admitted_mask & (1 << i)) continue;
    const Group& g = groups[i];
    const int busy = occ.union_count(g.path->links());
    if (static_cast<double>(busy + g.width) <=
        max_congestion * occ.slots + 1e-9) {
      occ.fill(g.path->links(), g.start_slot, g.width);
      if (admission_order_exists(groups, occ, max_congestion,
                                 admitted_mask | (1 << i), dead, order)) {
        occ.clear(g.path->links(), g.start_slot, g.width);
        order.push_back(i);
        return true;
      }
      occ.clear(g.path->links(), g.start_slot, g.width);
    }
  }
  dead.insert(admitted_mask);
  return false;
}

// Restricted-growth-string enumeration of all partitions of n items.
// Calls visit(block_of_item) for every partition; visit returns false to
// abort the whole enumeration.
template <typename Visit>
bool for_each_partition(int n, Visit visit) {
  std::vector<int> rgs(n, 0);
  while (true) {
    if (!visit(rgs)) return false;
    // next restricted growth string
    int i = n - 1;
    for (; i > 0; --i) {
      int max_prefix = 0;
      for (int j = 0; j < i; ++j) max_prefix = std::max(max_prefix, rgs[j]);
      if (rgs[i] <= max_prefix) break;
    }
    if (i == 0) return true;  // exhausted
    ++rgs[i];
    std::fill(rgs.begin() + i + 1, rgs.end(), 0);
  }
}

struct Searcher {
  const TinyInstance& inst;
  std::uint64_t states = 0;
  std::map<std::pair<NodeId, NodeId>, std::vector<Path>> path_pool;

  explicit Searcher(const TinyInstance& i) : inst(i) {}

  void bump() {
    if (++states > inst.state_cap) {
      throw CapExceededError("solve_exact: state cap of " +
                             std::to_string(inst.state_cap) + " exceeded");
    }
  }

  const std::vector<Path>& paths_between(NodeId s, NodeId d) {
    auto key = std::make_pair(s, d);
    auto it = path_pool.find(key);
    if (it == path_pool.end()) {
      it = path_pool.emplace(key, all_simple_paths(inst.graph, s, d)).first;
    }
    return it->second;
  }

  // Assign a (path, start slot) to every group, keeping intervals disjoint,
  // then require an admission order. On success the placement is left in
  // `groups` and `admission` holds a valid admission sequence (indices).
  bool place_groups(std::vector<Group>& groups, std::size_t index,
                    OccMatrix& occ, std::vector<int>& admission) {
    if (index == groups.size()) {
      std::set<int> dead;
      OccMatrix base(occ.links, occ.slots);
      for (const auto& a : inst.background) {
        base.fill(a.path.links(), a.start_slot, a.width);
      }
      admission.clear();
      if (!admission_order_exists(groups, base, inst.max_congestion, 0, dead,
                                  admission)) {
        return false;
      }
      std::reverse(admission.begin(), admission.end());
      return true;
    }
    Group& g = groups[index];
    const auto& candidates =
        paths_between(inst.dcs[g.source_dc].node, inst.dcs[g.dest_dc].node);
    for (const Path& p : candidates) {
      for (int f = 0; f + g.width <= inst.slots_per_link; ++f) {
        bump();
        if (!occ.interval_free(p.links(), f, g.width)) continue;
        occ.fill(p.links(), f, g.width);
        g.path = &p;
        g.start_slot = f;
        if (place_groups(groups, index + 1, occ, admission)) return true;
        occ.clear(p.links(), f, g.width);
      }
    }
    g.path = nullptr;
    g.start_slot = -1;
    return false;
  }

  // Split each pair's moved VM set into granularity-respecting groups in
  // every possible way, and try to place each grouping.
  bool feasible(const std::map<std::pair<int, int>, std::vector<double>>& moves,
                std::vector<Group>& witness) {
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::vector<std::vector<Group>>> groupings;  // per pair
    for (const auto& [pair, bws] : moves) {
      pairs.push_back(pair);
      std::vector<std::vector<Group>> pair_groupings;
      const int n = static_cast<int>(bws.size());
      for_each_partition(n, [&](const std::vector<int>& rgs) {
        bump();
        int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<Group> gs(blocks);
        for (auto& g : gs) {
          g.source_dc = pair.first;
          g.dest_dc = pair.second;
        }
        for (int i = 0; i < n; ++i) gs[rgs[i]].bandwidths.push_back(bws[i]);
        bool all_fit = true;
        for (auto& g : gs) {
          double sum = 0;
          for (double b : g.bandwidths) sum += b;
          g.width = slots_needed(sum, inst.slot_capacity);
          if (g.width > inst.granularity || g.width > inst.slots_per_link) {
            all_fit = false;
            break;
          }
        }
        if (all_fit) pair_groupings.push_back(std::move(gs));
        return true;
      });
      if (pair_groupings.empty()) return false;  // some VM set cannot split
      groupings.push_back(std::move(pair_groupings));
    }

    // Cartesian product over the per-pair groupings.
    std::vector<std::size_t> choice(pairs.size(), 0);
    while (true) {
      std::vector<Group> groups;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& gs = groupings[i][choice[i]];
        groups.insert(groups.end(), gs.begin(), gs.end());
      }
      OccMatrix occ(inst.graph.link_count(), inst.slots_per_link);
      for (const auto& a : inst.background) {
        occ.fill(a.path.links(), a.start_slot, a.width);
      }
      std::vector<int> admission;
      if (place_groups(groups, 0, occ, admission)) {
        // emit the witness in a sequentially admissible order
        witness.clear();
        for (int i : admission) witness.push_back(groups[i]);
        return true;
      }
      // advance the odometer
      std::size_t i = 0;
      for (; i < pairs.size(); ++i) {
        if (++choice[i] < groupings[i].size()) break;
        choice[i] = 0;
      }
      if (i == pairs.size()) return false;
    }
  }
};

}  // namespace

OracleSolution solve_exact(const TinyInstance& inst) {
  const int dc_count = static_cast<int>(inst.dcs.size());
  if (dc_count < 1 || dc_count > 4) {
    throw std::invalid_argument("solve_exact: expected 1..4 datacenters");
  }
  std::vector<std::pair<int, double>> vms;  // (home dc, bandwidth)
  for (int m = 0; m < dc_count; ++m) {
    const auto& dc = inst.dcs[m];
    if (static_cast<int>(dc.vm_bandwidths.size()) != dc.hosted) {
      throw std::invalid_argument("solve_exact: bandwidth list mismatch");
    }
    for (double bw : dc.vm_bandwidths) vms.emplace_back(m, bw);
  }
  if (vms.size() > 10) {
    throw std::invalid_argument("solve_exact: too many VMs for enumeration");
  }
  for (const auto& a : inst.background) {
    if (a.start_slot < 0 || a.start_slot + a.width > inst.slots_per_link) {
      throw std::invalid_argument("solve_exact: background outside spectrum");
    }
  }

  struct Candidate {
    double cost;
    int moved;
    std::vector<int> digits;
  };
  std::vector<Candidate> candidates;
  std::vector<int> digits(vms.size(), 0);
  while (true) {
    std::vector<int> count(dc_count, 0);
    int moved = 0;
    for (std::size_t i = 0; i < vms.size(); ++i) {
      ++count[digits[i]];
      if (digits[i] != vms[i].first) ++moved;
    }
    bool ok = true;
    for (int m = 0; m < dc_count; ++m) {
      if (count[m] > inst.dcs[m].capacity()) ok = false;
    }
    if (ok) {
      double cost = 0;
      for (int m = 0; m < dc_count; ++m) {
        Datacenter probe = inst.dcs[m];
        probe.hosted = count[m];
        probe.vm_bandwidths.clear();  // not consulted by brown_energy
        cost += probe.price * brown_energy(probe, inst.energy);
      }
      candidates.push_back({cost, moved, digits});
    }
    std::size_t i = 0;
    for (; i < digits.size(); ++i) {
      if (++digits[i] < dc_count) break;
      digits[i] = 0;
    }
    if (i == digits.size()) break;
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return std::tie(a.cost, a.moved, a.digits) <
                     std::tie(b.cost, b.moved, b.digits);
            });

  Searcher searcher(inst);
  for (const auto& cand : candidates) {
    std::map<std::pair<int, int>, std::vector<double>> moves;
    for (std::size_t i = 0; i < vms.size(); ++i) {
      if (cand.digits[i] != vms[i].first) {
        moves[{vms[i].first, cand.digits[i]}].push_back(vms[i].second);
      }
    }
    std::vector<Group> witness;
    if (moves.empty() || searcher.feasible(moves, witness)) {
      OracleSolution solution;
      solution.cost = cand.cost;
      solution.states_explored = searcher.states;
      for (const auto& g : witness) {
        PlannedMigration pm{g.source_dc, g.dest_dc, g.bandwidths, *g.path,
                            g.start_slot, g.width};
        solution.witness.push_back(std::move(pm));
      }
      return solution;
    }
  }
  // The identity assignment needs no network resources, so the loop above
  // always returns; reaching this line means the instance data was broken.
  throw std::logic_error("solve_exact: no feasible assignment found");
}

namespace {

bool path_well_formed(const Graph& g, const Path& p) {
  const auto& nodes = p.nodes();
  if (nodes.size() < 2) return false;
  std::set<NodeId> seen;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] < 1 || nodes[i] > g.node_count()) return false;
    if (!seen.insert(nodes[i]).second) return false;
    if (i + 1 < nodes.size() && !g.link_between(nodes[i], nodes[i + 1])) {
      return false;
    }
  }
  return true;
}

}  // namespace

FeasibilityReport check_feasible(const PlanCheckInput& input) {
  FeasibilityReport report;
  auto fail = [&](const std::string& tag, const std::string& detail) {
    report.ok = false;
    report.violations.push_back(tag + ": " + detail);
  };

  const int n = static_cast<int>(input.dcs.size());
  long long hosted_total = 0, target_total = 0;
  for (const auto& dc : input.dcs) hosted_total += dc.hosted;
  for (int t : input.target.vm_count) target_total += t;
  if (static_cast<int>(input.target.vm_count.size()) != n) {
    fail("conservation", "target vector size mismatch");
    return report;
  }
  if (hosted_total != target_total) {
    fail("conservation", "target moves " + std::to_string(target_total) +
                             " VMs but " + std::to_string(hosted_total) +
                             " are hosted");
  }
  for (int m = 0; m < n; ++m) {
    if (input.target.vm_count[m] > input.dcs[m].capacity()) {
      fail("dc-capacity", "target exceeds capacity at node " +
                              std::to_string(input.dcs[m].node));
    }
  }

  // Replay migrations over the background, re-deriving everything.
  OccMatrix occ(input.graph->link_count(), input.slots_per_link);
  for (const auto& a : input.background) {
    if (a.start_slot < 0 || a.start_slot + a.width > input.slots_per_link) {
      fail("link-capacity", "background interval outside spectrum");
      continue;
    }
    if (!occ.interval_free(a.path.links(), a.start_slot, a.width)) {
      fail("non-overlap", "background intervals overlap");
    }
    occ.fill(a.path.links(), a.start_slot, a.width);
  }

  std::vector<int> load(n);
  for (int m = 0; m < n; ++m) load[m] = input.dcs[m].hosted;

  for (const auto& rec : input.migrations) {
    if (!rec.accepted) continue;
    const auto& g = rec.group;
    const std::string where = "migration round " + std::to_string(rec.round);
    if (g.source_dc < 0 || g.source_dc >= n || g.dest_dc < 0 ||
        g.dest_dc >= n) {
      fail("conservation", where + ": bad datacenter index");
      continue;
    }
    double sum = 0;
    for (double b : g.bandwidths) sum += b;
    if (g.width != slots_needed(sum, input.slot_capacity)) {
      fail("width-arithmetic", where + ": width " + std::to_string(g.width) +
                                   " does not match bandwidth sum");
    }
    if (g.width > input.granularity) {
      fail("granularity-cap", where + ": width above cap");
    }
    if (!rec.path || !rec.start_slot) {
      fail("path-continuity", where + ": accepted without path or slot");
      continue;
    }
    if (!path_well_formed(*input.graph, *rec.path)) {
      fail("path-continuity", where + ": path is not a simple walk");
      continue;
    }
    if (*rec.start_slot < 0 ||
        *rec.start_slot + g.width > input.slots_per_link) {
      fail("link-capacity", where + ": interval outside spectrum");
      continue;
    }
    const int busy = occ.union_count(rec.path->links());
    if (static_cast<double>(busy + g.width) >
        input.max_congestion * input.slots_per_link + 1e-9) {
      fail("congestion-ratio", where + ": ratio above threshold");
    }
    if (!occ.interval_free(rec.path->links(), *rec.start_slot, g.width)) {
      fail("non-overlap", where + ": interval collides");
    }
    occ.fill(rec.path->links(), *rec.start_slot, g.width);

    const int moved = static_cast<int>(g.bandwidths.size());
    load[g.source_dc] -= moved;
    load[g.dest_dc] += moved;
    if (load[g.source_dc] < 0) {
      fail("conservation", where + ": source sheds more VMs than it hosts");
    }
    if (load[g.dest_dc] > input.dcs[g.dest_dc].capacity()) {
      fail("dc-capacity", where + ": destination over capacity");
    }
  }
  return report;
}

TinyInstance random_tiny_instance(Rng& rng, const TinyFamilyOptions& opts) {
  static const std::vector<std::vector<std::pair<NodeId, NodeId>>> kShapes = {
      {{1, 2}, {2, 3}},
      {{1, 2}, {1, 3}, {2, 4}, {3, 4}},
      {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 5}, {2, 5}},
      {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {1, 6}, {2, 6}, {3, 5}},
  };
  static const std::vector<int> kShapeNodes = {3, 4, 5, 6};

  const int shape = opts.single_pair_uncongested ? rng.uniform_int(1, 3)
                                                 : rng.uniform_int(0, 3);
  TinyInstance inst{.graph = Graph(kShapeNodes[shape], kShapes[shape])};
  inst.energy = EnergyParams{10.0, 1.2};
  inst.state_cap = opts.state_cap;

  const int node_count = inst.graph.node_count();
  std::vector<NodeId> nodes(node_count);
  for (int i = 0; i < node_count; ++i) nodes[i] = i + 1;
  // Fisher-Yates prefix to place datacenters on distinct nodes.
  for (int i = 0; i < node_count - 1; ++i) {
    std::swap(nodes[i], nodes[rng.uniform_int(i, node_count - 1)]);
  }

  if (opts.single_pair_uncongested) {
    inst.slots_per_link = 64;
    inst.granularity = rng.uniform_int(2, 4);
    inst.max_congestion = 1.0;
    Datacenter source;
    source.node = nodes[0];
    source.servers = 3;
    source.vms_per_server = 2;
    source.renewable = 0.0;
    source.price = rng.uniform(2.0, 3.2);
    source.hosted = rng.uniform_int(1, source.capacity());
    Datacenter dest;
    dest.node = nodes[1];
    dest.servers = 4;
    dest.vms_per_server = 2;
    dest.renewable = 1e6;
    dest.price = rng.uniform(1.6, 2.0);
    dest.hosted = 0;
    for (auto* dc : {&source, &dest}) {
      for (int i = 0; i < dc->hosted; ++i) {
        dc->vm_bandwidths.push_back(rng.uniform(1.0, 14.0));
      }
    }
    if (source.node > dest.node) std::swap(source, dest);
    inst.dcs = {source, dest};
    return inst;
  }

  inst.slots_per_link = rng.uniform_int(4, 12);
  inst.granularity = rng.uniform_int(1, 4);
  inst.max_congestion =
      std::vector<double>{0.6, 0.8, 1.0}[rng.uniform_int(0, 2)];

  const int dc_count = rng.uniform_int(2, 3);
  int vm_budget = 6;
  for (int m = 0; m < dc_count; ++m) {
    Datacenter dc;
    dc.node = nodes[m];
    dc.vms_per_server = rng.uniform_int(1, 2);
    dc.servers = rng.uniform_int(1, 3);
    dc.hosted = rng.uniform_int(0, std::min(dc.capacity(), vm_budget));
    vm_budget -= dc.hosted;
    dc.renewable = rng.uniform() < 0.3
                       ? 0.0
                       : rng.uniform(0.0, 1.3 * inst.energy.pue *
                                              inst.energy.server_power *
                                              dc.servers);
    dc.price = rng.uniform(1.6, 3.2);
    for (int i = 0; i < dc.hosted; ++i) {
      dc.vm_bandwidths.push_back(rng.uniform(1.0, 14.0));
    }
    inst.dcs.push_back(std::move(dc));
  }
  std::sort(inst.dcs.begin(), inst.dcs.end(),
            [](const Datacenter& a, const Datacenter& b) {
              return a.node < b.node;
            });

  // A little pre-placed traffic so admission decisions have teeth.
  const int flows = rng.uniform_int(0, 2);
  SlotMap scratch(inst.graph.link_count(), inst.slots_per_link);
  for (int i = 0; i < flows; ++i) {
    const NodeId a = rng.uniform_int(1, node_count);
    int other = rng.uniform_int(1, node_count - 1);
    const NodeId b = other >= a ? other + 1 : other;
    const auto pool = all_simple_paths(inst.graph, a, b);
    if (pool.empty()) continue;
    const Path& p = pool[rng.uniform_int(0, int(pool.size()) - 1)];
    const int width = rng.uniform_int(1, 2);
    if (auto f = scratch.first_fit(p, width)) {
      SpectrumAllocation alloc{p, *f, width, -100 - i};
      scratch.allocate(alloc);
      inst.background.push_back(alloc);
    }
  }
  return inst;
}

}  // namespace greenmig
