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

#ifndef CVXSUB_SOLVERS_HPP
#define CVXSUB_SOLVERS_HPP

#include <optional>
#include <string>
#include <vector>

#include "cvxsub/continuous.hpp"
#include "cvxsub/core.hpp"
#include "cvxsub/discrete.hpp"
#include "cvxsub/multilinear.hpp"
#include "cvxsub/objectives.hpp"

namespace cvxsub {

struct SolverConfig {
  int horizon = 100;  // T >= 1
  StepSchedule schedule = StepSchedule::constant_over_sqrt_t(1.0);
  std::uint64_t seed = 0;
  EstimatorConfig estimator;      // continuous-extension solver, sampled mode
  bool exact_extension = false;   // continuous-extension solver, n <= 20
  int trace_every = 1;            // record every j-th iteration
  bool allow_unsafe_step = false; // override the constant-step safety check
  std::optional<double> l_y_override;  // override the derived extension smoothness
};

struct IterationRecord {
  int t = 0;
  double gamma = 0.0;
  Vector x;                                // x_t
  std::optional<Vector> x_hat;             // extra-gradient midpoint
  SubsetSelection set;                     // S_t (rounded y_t for the extension solver)
  std::optional<SubsetSelection> set_hat;  // S-hat_t when the algorithm has one
  std::optional<std::vector<double>> y;      // y_t (extension solver)
  std::optional<std::vector<double>> y_hat;  // y-hat_t
  double wall_ms = 0.0;   // update cost of iteration t (not reproducible)
  std::uint64_t evals = 0;  // objective evaluations spent by iteration t
};

// Which theorem hypotheses were verifiable for this run. Results never claim
// a certificate silently: `certified` is true only when every hypothesis of
// the respective guarantee held.
struct GuaranteeFlags {
  double alpha = 0.0;
  bool smoothness_available = false;
  bool gradient_bound_available = false;
  bool gradient_bound_required = false;
  bool step_condition_verified = true;
  bool certified = false;
};

struct SolveResult {
  std::string algorithm;
  Vector x_sol;  // (sum gamma_t)^-1 sum gamma_t x_t (or x-hat_t for the
                 // extra-gradient variants), accumulated in t order
  std::vector<IterationRecord> trace;
  SubsetSelection visited_union;  // union of every S_t (and S-hat_t) seen
  GuaranteeFlags guarantees;
  int horizon = 0;
  int trace_every = 1;
  std::uint64_t seed = 0;
};

// Alternating projected-gradient / greedy updates; averages x_t.
SolveResult solve_gg(const Objective& obj, const MatroidConstraint& c,
                     const FeasibleRegion& region, const SolverConfig& cfg);

// Extra-gradient variant: probes (x-hat_t, S-hat_t) and updates with the
// midpoint gradient; averages x-hat_t. No bounded-gradient hypothesis.
SolveResult solve_egg(const Objective& obj, const MatroidConstraint& c,
                      const FeasibleRegion& region, const SolverConfig& cfg);

// Gradient + replacement-greedy (uniform constraints only); averages x_t.
SolveResult solve_grg(const Objective& obj, const MatroidConstraint& c,
                      const FeasibleRegion& region, const SolverConfig& cfg);

// Extra-gradient + replacement-greedy (uniform only); the auxiliary set is
// computed at (x_t, S_t) as printed in the source algorithm; averages x-hat_t.
SolveResult solve_egrg(const Objective& obj, const MatroidConstraint& c,
                       const FeasibleRegion& region, const SolverConfig& cfg);

// Extra-gradient on the continuous extension F(x, y) over the matroid
// polytope. Requires a constant step gamma <= 1/max(L_x, L_y); violations are
// a ConfigError unless allow_unsafe_step is set. Averages x-hat_t; the trace
// carries y_t and a rounded set for reporting.
SolveResult solve_egce(const Objective& obj, const MatroidConstraint& c,
                       const FeasibleRegion& region, const SolverConfig& cfg);

// Derived default for the extension smoothness L_y: n times the largest
// marginal magnitude the objective family admits on its region.
std::optional<double> default_extension_smoothness(const Objective& obj);

struct MaxMinExtraction {
  SubsetSelection set;   // union of visited sets; may exceed the cardinality cap
  double value = 0.0;    // min_x f(x, set)
  InnerMinResult inner;
};

// Bi-criteria max-min solution: the union of visited sets with its inner
// minimization value. The union's cardinality is reported, never truncated.
MaxMinExtraction extract_maxmin_solution(const SolveResult& result, const Objective& obj,
                                         const FeasibleRegion& region, double tol,
                                         int max_iters = 200000);

}  // namespace cvxsub

#endif  // CVXSUB_SOLVERS_HPP
