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

#ifndef CVXSUB_DISCRETE_HPP
#define CVXSUB_DISCRETE_HPP

#include <cstdint>
#include <vector>

#include "cvxsub/core.hpp"
#include "cvxsub/objectives.hpp"

namespace cvxsub {

// Instrumentation of a greedy run: the elements picked, in order, with their
// marginal gains. For uniform constraints the gains are non-increasing.
struct GreedyTrace {
  struct Pick {
    ElementId element;
    double gain;
  };
  std::vector<Pick> picks;
};

struct GreedyResult {
  SubsetSelection set;
  GreedyTrace trace;
};

// Greedy maximization of f(x, .) under a matroid constraint: starting from
// the empty set, repeatedly add the feasible element of maximum marginal
// gain (smallest index on ties) until no feasible addition remains. Under
// Uniform(k) the result has exactly min(k, n) elements; zero-gain elements
// are still added.
//
// The candidate sweep runs on the parallel kernels with a deterministic
// smallest-index argmax, so selections are bit-identical to a serial scan.
GreedyResult greedy(const Objective& obj, const MatroidConstraint& c, const Vector& x);

// One replacement-greedy update under a cardinality cap k (uniform
// constraints only). Below capacity it adds the best element. At capacity it
// removes e* = argmax_{e in s} f(x, s - e) and adds the best replacement,
// with the replacement argmax ranging over e* as well, so the update never
// decreases the value (S+ = s when nothing strictly improves).
SubsetSelection replacement_greedy(const Objective& obj, int k, const Vector& x,
                                   const SubsetSelection& s);

struct BruteForceResult {
  SubsetSelection set;
  double value = 0.0;
};

inline constexpr std::int64_t kDefaultEnumerationCap = 5'000'000;

// Number of independent sets of the constraint (saturating at cap + 1).
std::int64_t count_independent_sets(const MatroidConstraint& c,
                                    std::int64_t cap = kDefaultEnumerationCap);

// All independent sets as bitmasks, in lexicographic order of their ascending
// element sequences. Requires n <= 24 and at most cap sets.
std::vector<std::uint32_t> enumerate_independent_masks(const MatroidConstraint& c,
                                                       std::int64_t cap = kDefaultEnumerationCap);

// Exact maximizer of f(x, .) over all independent sets by full enumeration;
// ties resolve to the lexicographically smallest set. Throws SizeError when
// the instance exceeds the enumeration cap (never truncates silently).
BruteForceResult brute_force_max(const Objective& obj, const MatroidConstraint& c, const Vector& x,
                                 std::int64_t cap = kDefaultEnumerationCap);

}  // namespace cvxsub

#endif  // CVXSUB_DISCRETE_HPP
