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

#ifndef CVXSUB_EVALUATION_HPP
#define CVXSUB_EVALUATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "cvxsub/core.hpp"
#include "cvxsub/discrete.hpp"
#include "cvxsub/objectives.hpp"
#include "cvxsub/solvers.hpp"

namespace cvxsub {

enum class MetricKind { kPhiExact, kPhiGreedy, kErrorVsFinal, kErrorVsOpt };

struct MetricPoint {
  int t = 0;
  double value = 0.0;
};

struct MetricSeries {
  MetricKind kind = MetricKind::kPhiGreedy;
  std::vector<MetricPoint> points;
};

// Worst-case value over independent sets at x, by full enumeration.
double phi_bar_exact(const Objective& obj, const MatroidConstraint& c, const Vector& x,
                     std::int64_t cap = kDefaultEnumerationCap);

// Greedy surrogate f(x, Greedy(f, k, x)); sandwiched between
// (1 - 1/e) * phi_bar_exact and phi_bar_exact on enumerable instances.
double phi_greedy(const Objective& obj, const MatroidConstraint& c, const Vector& x);

// Reference value for OPT = min_x max_S f(x, S) on enumerable instances:
// projected subgradient descent on the pointwise max, diminishing steps
// c/sqrt(t) seeded at the region diameter and halved on stalls, best-iterate
// reporting. Always an approximate reference, and labeled as such.
struct OptReference {
  double value = 0.0;
  Vector x;
  int iterations = 0;
  bool hit_iteration_cap = false;
  bool step_resolution_reached = false;
  std::string label = "approximate reference (projected subgradient on the exact max)";
};

OptReference compute_opt_minimax(const Objective& obj, const MatroidConstraint& c,
                                 const FeasibleRegion& region, double tol,
                                 int max_iters = 100000,
                                 std::optional<Vector> start = std::nullopt);

// Checks alpha * phi_bar(x) <= opt_ref + eps, with the exact phi when the
// instance is enumerable and the greedy surrogate otherwise (labeled).
struct CertificateRecord {
  double alpha = 0.0;
  double eps = 0.0;
  double phi_value = 0.0;  // phi_bar_exact(x) or phi_greedy(x)
  bool phi_is_exact = false;
  double lhs = 0.0;  // alpha * phi_value
  double rhs = 0.0;  // opt_ref + eps
  double opt_ref = 0.0;
  bool verdict = false;
};

CertificateRecord certify(double alpha, const Vector& x, const Objective& obj,
                          const MatroidConstraint& c, const FeasibleRegion& region,
                          double opt_ref, double eps,
                          std::int64_t cap = kDefaultEnumerationCap);

// Worst-case metric along a trace, one point per traced iterate (the
// extra-gradient variants contribute their midpoints, the iterates that the
// averaged solution is built from).
MetricSeries phi_series(const Objective& obj, const MatroidConstraint& c,
                        const std::vector<IterationRecord>& trace, bool exact,
                        std::int64_t cap = kDefaultEnumerationCap);

enum class ErrorMode { kVsFinal, kVsOpt };

MetricSeries error_series(const Objective& obj, const MatroidConstraint& c,
                          const std::vector<IterationRecord>& trace, ErrorMode mode,
                          std::optional<double> opt_ref = std::nullopt, bool exact = false,
                          std::int64_t cap = kDefaultEnumerationCap);

MetricSeries error_series_from_phi(const MetricSeries& phi, ErrorMode mode,
                                   std::optional<double> opt_ref = std::nullopt);

}  // namespace cvxsub

#endif  // CVXSUB_EVALUATION_HPP
