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

#ifndef GREENMIG_RNG_HPP
#define GREENMIG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace greenmig {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed-splitting rule used by the harness: independent streams are derived
/// from (base seed, stream tag, stream index) so that replications and load
/// points never share a generator state.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                                 std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(base) ^ tag) ^ index);
}

/// Deterministic random source. All distributions are implemented on top of
/// the raw mt19937_64 output so that streams are identical across standard
/// library implementations (std::*_distribution makes no such promise).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1), never returning either endpoint.
  double uniform_open() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], both ends inclusive.
  int uniform_int(int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - lo + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return lo + static_cast<int>(x % span);
  }

  double exponential(double mean) { return -mean * std::log(uniform_open()); }

  /// Poisson sample via unit-rate arrival counting; exact and portable for
  /// the mean values used here (a few hundred at most).
  int poisson(double mean) {
    if (mean < 0) throw std::invalid_argument("poisson: negative mean");
    int count = 0;
    double t = exponential(1.0);
    while (t <= mean) {
      ++count;
      t += exponential(1.0);
    }
    return count;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace greenmig

#endif  // GREENMIG_RNG_HPP
