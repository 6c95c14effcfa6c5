// Copyright 2026 The ProxySel Authors
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

#ifndef PROXYSEL_RNG_HPP
#define PROXYSEL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace proxysel {

// All randomness in this project flows through SplitMix64 (Steele, Lea &
// Flood, "Fast splittable pseudorandom number generators", OOPSLA 2014).
// std::mt19937 + std::*_distribution are avoided on purpose: distribution
// output is implementation-defined, SplitMix64 streams are bit-identical
// on every platform.

/// SplitMix64 finalizer. Maps a 64-bit value to a well-mixed 64-bit value.
inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and a stream index.
/// mix(s, i) = finalize(s + (i + 1) * golden_gamma). Documented so that
/// experiment seeds can be reproduced outside this code base.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64_finalize(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Counter-based SplitMix64 stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_finalize(state_);
  }

  /// Uniform double in [0, 1), 53 significant bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  /// One standard normal sample via Box-Muller. Consumes two uniforms per
  /// pair; the spare sample is cached.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so that log(u1) is finite.
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace proxysel

#endif  // PROXYSEL_RNG_HPP
