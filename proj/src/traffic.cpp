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

#include "greenmig/traffic.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "greenmig/rng.hpp"

namespace greenmig {

BackgroundSummary steady_state_background(const Graph& g,
                                          const RoutingTable& routes,
                                          SlotMap& slots, const LoadSpec& spec,
                                          double slot_capacity) {
  if (spec.erlangs < 0) {
    throw std::invalid_argument("steady_state_background: negative load");
  }
  if (spec.bandwidth_min <= 0 || spec.bandwidth_max < spec.bandwidth_min) {
    throw std::invalid_argument("steady_state_background: bad bandwidth range");
  }
  BackgroundSummary summary;
  if (spec.erlangs == 0) return summary;

  // Warm-up window in units of the mean holding time. Arrivals are Poisson
  // at rate erlangs, holdings exponential with mean one, so the in-flight
  // count at the snapshot instant is Poisson with mean erlangs (minus
  // drops) and the surviving intervals carry the fragmentation a live
  // system would show.
  constexpr double kWarmup = 10.0;
  Rng rng(spec.seed);
  std::priority_queue<std::pair<double, std::int64_t>,
                      std::vector<std::pair<double, std::int64_t>>,
                      std::greater<>>
      departures;
  std::vector<BackgroundRequest> placed_requests;
  double now = 0.0;
  std::int64_t id = 0;
  while (true) {
    now += rng.exponential(1.0 / spec.erlangs);
    if (now > kWarmup) break;
    while (!departures.empty() && departures.top().first <= now) {
      slots.release(departures.top().second);
      departures.pop();
    }
    BackgroundRequest req;
    req.src = rng.uniform_int(1, g.node_count());
    int other = rng.uniform_int(1, g.node_count() - 1);
    req.dst = other >= req.src ? other + 1 : other;
    req.bandwidth = rng.uniform(spec.bandwidth_min, spec.bandwidth_max);
    req.arrival = now - kWarmup;  // relative to the snapshot instant
    req.holding = rng.exponential(1.0);
    ++summary.offered;

    const int width = slots_needed(req.bandwidth, slot_capacity);
    const Path path = routes.shortest_path(req.src, req.dst);
    if (auto start = slots.first_fit(path, width)) {
      req.id = id;
      slots.allocate(SpectrumAllocation{path, *start, width, req.id});
      departures.emplace(now + req.holding, req.id);
      placed_requests.push_back(req);
      ++summary.placed;
      ++id;
    } else {
      ++summary.dropped;
    }
  }
  while (!departures.empty() && departures.top().first <= kWarmup) {
    slots.release(departures.top().second);
    departures.pop();
  }
  // Report the requests still holding spectrum at the snapshot.
  for (const auto& req : placed_requests) {
    if (req.arrival + req.holding > 0) summary.requests.push_back(req);
  }
  return summary;
}

MigrationDemand demand_from_gap(std::span<const Datacenter> dcs,
                                const WorkloadTarget& target) {
  const Classification cls = classify(dcs, target);
  MigrationDemand demand;
  demand.shed.assign(dcs.size(), {});
  for (int m : cls.sources) {
    const int gap = dcs[m].hosted - target.vm_count[m];
    if (static_cast<int>(dcs[m].vm_bandwidths.size()) != dcs[m].hosted) {
      throw std::invalid_argument(
          "demand_from_gap: bandwidth list size does not match hosted count");
    }
    std::vector<double> sorted = dcs[m].vm_bandwidths;
    std::sort(sorted.begin(), sorted.end());
    demand.shed[m].assign(sorted.begin(), sorted.begin() + gap);
  }
  return demand;
}

}  // namespace greenmig
