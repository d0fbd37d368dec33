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

#include "cvxsub/evaluation.hpp"

#include <cmath>

#include "cvxsub/continuous.hpp"
#include "cvxsub/parallel.hpp"

namespace cvxsub {

double phi_bar_exact(const Objective& obj, const MatroidConstraint& c, const Vector& x,
                     std::int64_t cap) {
  return brute_force_max(obj, c, x, cap).value;
}

double phi_greedy(const Objective& obj, const MatroidConstraint& c, const Vector& x) {
  auto ctx = obj.context(x);
  const SubsetSelection s = greedy(obj, c, x).set;
  return ctx->value(s);
}

OptReference compute_opt_minimax(const Objective& obj, const MatroidConstraint& c,
                                 const FeasibleRegion& region, double tol, int max_iters,
                                 std::optional<Vector> start) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  const int n = obj.ground_set_size();
  const std::vector<std::uint32_t> masks = enumerate_independent_masks(c);

  OptReference out;
  Vector x = start ? region.project(*start) : region.project(obj.initial_point());
  double step_scale = region.diameter();
  const double min_scale = 1e-10 * std::max(1.0, region.diameter());

  double best = std::numeric_limits<double>::infinity();
  Vector best_x = x;
  // Stall control: when the best value stops improving by tol/100 within a
  // window, halve the step scale and restart from the incumbent.
  const int kStallWindow = 500;
  double window_best = best;
  int window_start = 1;
  int t_epoch = 0;

  int t = 1;
  for (; t <= max_iters; ++t) {
    auto ctx = obj.context(x);
    const auto [idx, phi] = par::argmax(static_cast<std::int64_t>(masks.size()), [&](std::int64_t i) {
      return ctx->value(SubsetSelection::from_mask(n, masks[static_cast<std::size_t>(i)]));
    });
    if (phi < best) {
      best = phi;
      best_x = x;
    }
    if (phi < window_best - 0.01 * tol) {
      window_best = phi;
      window_start = t;
    }
    if (t - window_start >= kStallWindow) {
      step_scale *= 0.5;
      x = best_x;
      window_best = best;
      window_start = t;
      t_epoch = 0;
      if (step_scale < min_scale) {
        out.step_resolution_reached = true;
        break;
      }
      continue;
    }
    ++t_epoch;
    const Vector g =
        ctx->grad(SubsetSelection::from_mask(n, masks[static_cast<std::size_t>(idx)]));
    const double gamma = step_scale / std::sqrt(static_cast<double>(t_epoch));
    x = region.project(axpy(x, -gamma, g));
  }
  out.value = best;
  out.x = best_x;
  out.iterations = std::min(t, max_iters);
  out.hit_iteration_cap = (t > max_iters);
  return out;
}

CertificateRecord certify(double alpha, const Vector& x, const Objective& obj,
                          const MatroidConstraint& c, const FeasibleRegion& region,
                          double opt_ref, double eps, std::int64_t cap) {
  (void)region;
  CertificateRecord rec;
  rec.alpha = alpha;
  rec.eps = eps;
  rec.opt_ref = opt_ref;
  if (count_independent_sets(c, cap) <= cap && c.ground_set_size() <= 24) {
    rec.phi_value = phi_bar_exact(obj, c, x, cap);
    rec.phi_is_exact = true;
  } else {
    rec.phi_value = phi_greedy(obj, c, x);
    rec.phi_is_exact = false;
  }
  rec.lhs = alpha * rec.phi_value;
  rec.rhs = opt_ref + eps;
  rec.verdict = rec.lhs <= rec.rhs;
  return rec;
}

MetricSeries phi_series(const Objective& obj, const MatroidConstraint& c,
                        const std::vector<IterationRecord>& trace, bool exact,
                        std::int64_t cap) {
  MetricSeries series;
  series.kind = exact ? MetricKind::kPhiExact : MetricKind::kPhiGreedy;
  series.points.reserve(trace.size());
  for (const IterationRecord& rec : trace) {
    const Vector& x = rec.x_hat ? *rec.x_hat : rec.x;
    const double v = exact ? phi_bar_exact(obj, c, x, cap) : phi_greedy(obj, c, x);
    series.points.push_back({rec.t, v});
  }
  return series;
}

MetricSeries error_series_from_phi(const MetricSeries& phi, ErrorMode mode,
                                   std::optional<double> opt_ref) {
  MetricSeries out;
  out.kind = (mode == ErrorMode::kVsFinal) ? MetricKind::kErrorVsFinal : MetricKind::kErrorVsOpt;
  if (phi.points.empty()) return out;
  double ref = 0.0;
  if (mode == ErrorMode::kVsFinal) {
    ref = phi.points.back().value;
  } else {
    if (!opt_ref) throw PreconditionError("error-vs-opt needs an OPT reference");
    ref = *opt_ref;
  }
  out.points.reserve(phi.points.size());
  for (const MetricPoint& p : phi.points) out.points.push_back({p.t, p.value - ref});
  return out;
}

MetricSeries error_series(const Objective& obj, const MatroidConstraint& c,
                          const std::vector<IterationRecord>& trace, ErrorMode mode,
                          std::optional<double> opt_ref, bool exact, std::int64_t cap) {
  return error_series_from_phi(phi_series(obj, c, trace, exact, cap), mode, opt_ref);
}

}  // namespace cvxsub
