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

#ifndef GREENMIG_SPECTRUM_HPP
#define GREENMIG_SPECTRUM_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "greenmig/topology.hpp"

namespace greenmig {

/// Number of spectrum slots a flow of the given total bandwidth occupies.
/// Flows bundled into one allocation share slot capacity, so the width is
/// the ceiling of bandwidth over per-slot capacity; zero bandwidth needs
/// zero slots.
int slots_needed(double total_bandwidth_gbps, double slot_capacity_gbps);

struct FreeInterval {
  int start = 0;
  int length = 0;
  friend bool operator==(const FreeInterval&, const FreeInterval&) = default;
};

/// One lightpath footprint: the same contiguous slot interval
/// [start_slot, start_slot + width) on every link of the path.
struct SpectrumAllocation {
  Path path;
  int start_slot = 0;
  int width = 0;
  std::int64_t owner = 0;
};

/// Per-link slot occupancy for one network state. Single writer per
/// instance; independent copies are safe to mutate concurrently.
///
/// Two structural invariants are maintained at all times: a slot bit is set
/// on a link iff exactly one registered allocation covers it (non-overlap),
/// and every allocation occupies an identical interval on each of its links
/// (continuity, guaranteed by the (path, start, width) representation).
class SlotMap {
 public:
  SlotMap(int link_count, int slots_per_link);

  int link_count() const { return link_count_; }
  int slots_per_link() const { return slots_; }

  bool occupied(int link, int slot) const;
  int occupied_on_link(int link) const;

  /// Maximal intervals that are free on every link of p, ascending by start.
  std::vector<FreeInterval> path_free_intervals(const Path& p) const;

  /// Smallest start slot with [f, f+width) free on all links of p.
  std::optional<int> first_fit(const Path& p, int width) const;

  /// Sets the allocation's bits and registers it under its owner id.
  /// Throws if any covered bit is already busy or the interval exceeds the
  /// link capacity; that is a caller bug, not spectrum blocking.
  void allocate(const SpectrumAllocation& a);

  /// Clears every bit held by the owner's allocations. Unknown owner is an
  /// error.
  void release(std::int64_t owner);

  /// Slot indices busy on at least one link of p, as a count (the numerator
  /// of the congestion ratio).
  int path_occupied_count(const Path& p) const;

  /// path_occupied_count / slots_per_link, in [0, 1].
  double path_congestion(const Path& p) const;

  /// True iff admitting a width-wide flow on p keeps the path congestion
  /// ratio within max_ratio and a first-fit interval exists.
  bool admissible(const Path& p, int width, double max_ratio) const;

  std::size_t active_allocation_count() const;
  const std::vector<SpectrumAllocation>* allocations_of(std::int64_t owner) const;

  /// Every live allocation, ordered by owner id (stable across runs).
  std::vector<SpectrumAllocation> all_allocations() const;

  /// CSV dump of set bits: "link_id,slot_index" per row, ascending.
  void dump_occupancy_csv(std::ostream& out) const;
  std::vector<std::pair<int, int>> occupied_bits() const;

 private:
  std::vector<std::uint64_t> combined_occupancy(const Path& p) const;
  void check_link(int link) const;

  int link_count_;
  int slots_;
  int words_;
  std::vector<std::uint64_t> bits_;  // link-major, tail bits always zero
  std::unordered_map<std::int64_t, std::vector<SpectrumAllocation>> owners_;
};

struct CongestionReport {
  double path_ratio = 0.0;
  std::vector<double> per_link;
};

CongestionReport congestion_report(const SlotMap& sm, const Path& p);

}  // namespace greenmig

#endif  // GREENMIG_SPECTRUM_HPP
