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

#include "greenmig/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace greenmig {

int slots_needed(double total_bandwidth_gbps, double slot_capacity_gbps) {
  if (total_bandwidth_gbps < 0) {
    throw std::invalid_argument("slots_needed: negative bandwidth");
  }
  if (slot_capacity_gbps <= 0) {
    throw std::invalid_argument("slots_needed: non-positive slot capacity");
  }
  if (total_bandwidth_gbps == 0) return 0;
  return static_cast<int>(std::ceil(total_bandwidth_gbps / slot_capacity_gbps));
}

SlotMap::SlotMap(int link_count, int slots_per_link)
    : link_count_(link_count), slots_(slots_per_link) {
  if (link_count < 1) throw std::invalid_argument("SlotMap: no links");
  if (slots_per_link < 1) throw std::invalid_argument("SlotMap: no slots");
  words_ = (slots_ + 63) / 64;
  bits_.assign(static_cast<std::size_t>(link_count_) * words_, 0);
}

void SlotMap::check_link(int link) const {
  if (link < 0 || link >= link_count_) {
    throw std::invalid_argument("SlotMap: bad link id " + std::to_string(link));
  }
}

bool SlotMap::occupied(int link, int slot) const {
  check_link(link);
  if (slot < 0 || slot >= slots_) {
    throw std::invalid_argument("SlotMap: bad slot index");
  }
  return (bits_[static_cast<std::size_t>(link) * words_ + slot / 64] >>
          (slot % 64)) & 1u;
}

int SlotMap::occupied_on_link(int link) const {
  check_link(link);
  int count = 0;
  for (int w = 0; w < words_; ++w) {
    count += std::popcount(bits_[static_cast<std::size_t>(link) * words_ + w]);
  }
  return count;
}

std::vector<std::uint64_t> SlotMap::combined_occupancy(const Path& p) const {
  std::vector<std::uint64_t> acc(words_, 0);
  for (int link : p.links()) {
    check_link(link);
    const std::uint64_t* row = &bits_[static_cast<std::size_t>(link) * words_];
    for (int w = 0; w < words_; ++w) acc[w] |= row[w];
  }
  return acc;
}

std::vector<FreeInterval> SlotMap::path_free_intervals(const Path& p) const {
  const auto acc = combined_occupancy(p);
  std::vector<FreeInterval> out;
  int run_start = -1;
  for (int s = 0; s < slots_; ++s) {
    const bool busy = (acc[s / 64] >> (s % 64)) & 1u;
    if (!busy && run_start < 0) run_start = s;
    if (busy && run_start >= 0) {
      out.push_back({run_start, s - run_start});
      run_start = -1;
    }
  }
  if (run_start >= 0) out.push_back({run_start, slots_ - run_start});
  return out;
}

std::optional<int> SlotMap::first_fit(const Path& p, int width) const {
  if (width < 1) throw std::invalid_argument("first_fit: width < 1");
  const auto acc = combined_occupancy(p);
  int run_start = -1;
  for (int s = 0; s < slots_; ++s) {
    const bool busy = (acc[s / 64] >> (s % 64)) & 1u;
    if (busy) {
      run_start = -1;
    } else {
      if (run_start < 0) run_start = s;
      if (s - run_start + 1 >= width) return run_start;
    }
  }
  return std::nullopt;
}

void SlotMap::allocate(const SpectrumAllocation& a) {
  if (a.width < 1) throw std::invalid_argument("allocate: width < 1");
  if (a.start_slot < 0 || a.start_slot + a.width > slots_) {
    throw std::invalid_argument("allocate: interval exceeds link capacity");
  }
  for (int link : a.path.links()) {
    check_link(link);
    for (int s = a.start_slot; s < a.start_slot + a.width; ++s) {
      if ((bits_[static_cast<std::size_t>(link) * words_ + s / 64] >>
           (s % 64)) & 1u) {
        throw std::invalid_argument(
            "allocate: slot " + std::to_string(s) + " on link " +
            std::to_string(link) + " already in use");
      }
    }
  }
  for (int link : a.path.links()) {
    for (int s = a.start_slot; s < a.start_slot + a.width; ++s) {
      bits_[static_cast<std::size_t>(link) * words_ + s / 64] |=
          std::uint64_t{1} << (s % 64);
    }
  }
  owners_[a.owner].push_back(a);
}

void SlotMap::release(std::int64_t owner) {
  auto it = owners_.find(owner);
  if (it == owners_.end()) {
    throw std::invalid_argument("release: unknown owner " +
                                std::to_string(owner));
  }
  for (const auto& a : it->second) {
    for (int link : a.path.links()) {
      for (int s = a.start_slot; s < a.start_slot + a.width; ++s) {
        bits_[static_cast<std::size_t>(link) * words_ + s / 64] &=
            ~(std::uint64_t{1} << (s % 64));
      }
    }
  }
  owners_.erase(it);
}

int SlotMap::path_occupied_count(const Path& p) const {
  const auto acc = combined_occupancy(p);
  int count = 0;
  for (auto w : acc) count += std::popcount(w);
  return count;
}

double SlotMap::path_congestion(const Path& p) const {
  return static_cast<double>(path_occupied_count(p)) / slots_;
}

bool SlotMap::admissible(const Path& p, int width, double max_ratio) const {
  if (max_ratio <= 0 || max_ratio > 1) {
    throw std::invalid_argument("admissible: max_ratio outside (0, 1]");
  }
  const int occ = path_occupied_count(p);
  // Non-strict threshold, evaluated in slot counts to avoid float noise.
  if (static_cast<double>(occ + width) > max_ratio * slots_ + 1e-9) {
    return false;
  }
  return first_fit(p, width).has_value();
}

std::size_t SlotMap::active_allocation_count() const {
  std::size_t n = 0;
  for (const auto& [_, v] : owners_) n += v.size();
  return n;
}

const std::vector<SpectrumAllocation>* SlotMap::allocations_of(
    std::int64_t owner) const {
  auto it = owners_.find(owner);
  return it == owners_.end() ? nullptr : &it->second;
}

std::vector<SpectrumAllocation> SlotMap::all_allocations() const {
  std::vector<SpectrumAllocation> out;
  out.reserve(active_allocation_count());
  for (const auto& [_, allocs] : owners_) {
    out.insert(out.end(), allocs.begin(), allocs.end());
  }
  std::sort(out.begin(), out.end(),
            [](const SpectrumAllocation& a, const SpectrumAllocation& b) {
              return a.owner < b.owner;
            });
  return out;
}

std::vector<std::pair<int, int>> SlotMap::occupied_bits() const {
  std::vector<std::pair<int, int>> out;
  for (int link = 0; link < link_count_; ++link) {
    for (int s = 0; s < slots_; ++s) {
      if ((bits_[static_cast<std::size_t>(link) * words_ + s / 64] >>
           (s % 64)) & 1u) {
        out.emplace_back(link, s);
      }
    }
  }
  return out;
}

void SlotMap::dump_occupancy_csv(std::ostream& out) const {
  out << "link_id,slot_index\n";
  for (const auto& [link, slot] : occupied_bits()) {
    out << link << ',' << slot << '\n';
  }
}

CongestionReport congestion_report(const SlotMap& sm, const Path& p) {
  CongestionReport r;
  r.path_ratio = sm.path_congestion(p);
  r.per_link.reserve(p.links().size());
  for (int link : p.links()) {
    r.per_link.push_back(static_cast<double>(sm.occupied_on_link(link)) /
                         sm.slots_per_link());
  }
  return r;
}

}  // namespace greenmig
