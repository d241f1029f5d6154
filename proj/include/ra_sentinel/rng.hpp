// Copyright 2026, ra_sentinel contributors
//
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

/**
 * \file rng.hpp
 * \brief Portable seeded generators for synthetic data.
 *
 * xoshiro256** (Blackman & Vigna) seeded through SplitMix64. Independent
 * sub-streams are derived from (seed, stream tag, frame index), so changing
 * one stream's consumer never shifts another stream's draws. Uniforms take
 * the top 53 bits; normals use the cosine branch of Box-Muller.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace ra_sentinel {

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Unit-mean exponential.
  double exponential() { return -std::log(1.0 - uniform()); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_{};
};

enum class Stream : std::uint64_t {
  noise = 1,
  placement = 2,
  clutter = 3,
  target = 4,
};

/// Generator for one (seed, stream, frame) triple.
inline Xoshiro256 make_stream(std::uint64_t seed, Stream stream,
                              std::uint64_t frame) {
  std::uint64_t key = seed;
  std::uint64_t mixed = splitmix64_next(key);
  std::uint64_t tag = static_cast<std::uint64_t>(stream) * 0xD1B54A32D192ED03ull;
  mixed ^= splitmix64_next(tag);
  std::uint64_t fr = frame ^ 0xA0761D6478BD642Full;
  mixed ^= splitmix64_next(fr) * 0x9E3779B97F4A7C15ull;
  return Xoshiro256(mixed);
}

}  // namespace ra_sentinel
