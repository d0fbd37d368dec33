// Copyright 2026 The Authors.
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

#ifndef CVXSUB_RNG_HPP
#define CVXSUB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace cvxsub::rng {

// All randomness in the library flows through these helpers so that runs are
// reproducible bit-for-bit across platforms and thread counts. We avoid
// <random> distributions (their output is implementation-defined) and map
// mt19937_64 words to doubles explicitly.

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from (base, stream, index). Used for
// per-sample substreams so parallel sampling is order-independent.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(base ^ 0xD1B54A32D192ED03ull) + stream * 0x9E3779B97F4A7C15ull + index);
}

inline Engine make_engine(std::uint64_t seed) { return Engine(splitmix64(seed)); }

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Engine& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& g, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(g);
}

// Uniform integer in [0, n). Modulo bias is irrelevant at our sizes; what
// matters is that the mapping is fixed.
inline std::int64_t uniform_int(Engine& g, std::int64_t n) {
  return static_cast<std::int64_t>(g() % static_cast<std::uint64_t>(n));
}

// Standard normal via Box-Muller (two words per draw, no cached state).
inline double normal(Engine& g) {
  double u1 = uniform_unit(g);
  double u2 = uniform_unit(g);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace cvxsub::rng

#endif  // CVXSUB_RNG_HPP
