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

#ifndef CVXSUB_REFERENCE_HPP
#define CVXSUB_REFERENCE_HPP

#include <utility>
#include <vector>

#include "cvxsub/core.hpp"
#include "cvxsub/multilinear.hpp"
#include "cvxsub/objectives.hpp"

// Plain single-threaded reference implementations of the hot kernels,
// written as straight loops that recompute everything from scratch (no pair
// tables, no cached row maxima, no chunked reductions). The tests compare the
// production kernels against these, and the benchmark tool measures the gap.
namespace cvxsub::serial_ref {

double facility_value(const ConvexFacilityLocationSpec& spec, const std::vector<double>& x,
                      const SubsetSelection& s);
std::vector<double> facility_grad(const ConvexFacilityLocationSpec& spec,
                                  const std::vector<double>& x, const SubsetSelection& s);
double attack_value(const RecommenderAttackSpec& spec, const std::vector<double>& x,
                    const SubsetSelection& s);
double modular_value(const ModularQuadraticSpec& spec, const std::vector<double>& x,
                     const SubsetSelection& s);

// Greedy with a left-to-right argmax scan and definitional marginal gains.
SubsetSelection greedy(const Objective& obj, const MatroidConstraint& c, const Vector& x);

// Exhaustive maximization by recursive enumeration, lexicographic tie-break.
std::pair<SubsetSelection, double> brute_force_max(const Objective& obj,
                                                   const MatroidConstraint& c, const Vector& x);

// Naive 2^n sweep for the continuous extension.
double extension_value(const Objective& obj, const Vector& x, const FractionalPoint& y);

// Exact capped-simplex projection by sorted breakpoints (no bisection).
std::vector<double> capped_simplex_project(const std::vector<double>& x, int k);

}  // namespace cvxsub::serial_ref

#endif  // CVXSUB_REFERENCE_HPP
