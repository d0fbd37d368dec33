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

#ifndef CVXSUB_CONTINUOUS_HPP
#define CVXSUB_CONTINUOUS_HPP

#include <optional>

#include "cvxsub/core.hpp"
#include "cvxsub/objectives.hpp"

namespace cvxsub {

// Step-size schedule gamma_t for a fixed horizon T: either c / sqrt(T)
// (the default for the sqrt-horizon solvers) or a constant.
struct StepSchedule {
  enum class Kind { kConstantOverSqrtT, kConstant };

  Kind kind = Kind::kConstantOverSqrtT;
  double c = 1.0;

  static StepSchedule constant_over_sqrt_t(double c = 1.0) {
    return {Kind::kConstantOverSqrtT, c};
  }
  static StepSchedule constant(double gamma) { return {Kind::kConstant, gamma}; }

  double gamma(int t, int horizon) const;
  bool is_constant() const { return kind == Kind::kConstant; }
};

// Euclidean projection onto a feasible region (same as region.project(x)).
Vector project(const FeasibleRegion& region, const Vector& x);

// Projection onto {y in [0,1]^n : sum y <= k}. Clips to the box first; if the
// budget is still violated, solves the KKT threshold sum clip(x - tau, 0, 1)
// = k by bisection on tau to the given interval width.
std::vector<double> capped_simplex_project(const std::vector<double>& x, int k,
                                           double bisection_tol = 1e-10);

// One projected gradient step: project(region, x - gamma * grad f(x, s)).
Vector gradient_step(const Objective& obj, const Vector& x, const SubsetSelection& s,
                     double gamma, const FeasibleRegion& region);

// Result of the inner convex minimization min_x f(x, S).
struct InnerMinResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;          // projected-gradient norm reached tol
  double projected_gradient_norm = 0.0;
};

// Projected gradient descent with fixed step 1/L (L from objective metadata)
// until the projected-gradient norm ||x - project(x - grad)|| * L <= tol or
// max_iters is reached. Never throws on non-convergence; the flag reports
// which stop condition fired.
InnerMinResult minimize_over_x(const Objective& obj, const SubsetSelection& s,
                               const FeasibleRegion& region, double tol, int max_iters,
                               std::optional<Vector> start = std::nullopt);

}  // namespace cvxsub

#endif  // CVXSUB_CONTINUOUS_HPP
