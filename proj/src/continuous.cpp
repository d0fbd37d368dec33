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

#include "cvxsub/continuous.hpp"

#include <algorithm>
#include <cmath>

#include "cvxsub/parallel.hpp"

namespace cvxsub {

double StepSchedule::gamma(int t, int horizon) const {
  (void)t;
  if (horizon < 1) throw PreconditionError("horizon must be at least 1");
  const double g = (kind == Kind::kConstantOverSqrtT)
                       ? c / std::sqrt(static_cast<double>(horizon))
                       : c;
  if (!(g > 0.0)) throw PreconditionError("step size must be positive");
  return g;
}

namespace {

std::vector<double> clip_entrywise(const std::vector<double>& x, double lo, double hi) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::clamp(x[i], lo, hi);
  return y;
}

// Scales z - c into the radius-r ball around c when needed.
void scale_into_ball(std::vector<double>& z, const std::vector<double>& center, double radius) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double d = z[i] - center[i];
    d2 += d * d;
  }
  const double dist = std::sqrt(d2);
  if (dist <= radius) return;
  const double s = radius / dist;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = center[i] + s * (z[i] - center[i]);
}

// Dykstra's alternating projections for box-intersect-Frobenius-ball. Plain
// alternation would not give the Euclidean projection onto the intersection;
// the correction terms do.
std::vector<double> dykstra_box_ball(const std::vector<double>& x0,
                                     const std::vector<double>& center, double radius,
                                     double lo, double hi) {
  const std::size_t d = x0.size();
  std::vector<double> x(x0), p(d, 0.0), q(d, 0.0), y(d), prev(d);
  const int kMaxSweeps = 500;
  const double kMoveTol = 1e-8;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    prev = x;
    for (std::size_t i = 0; i < d; ++i) {
      const double t = x[i] + p[i];
      y[i] = std::clamp(t, lo, hi);
      p[i] = t - y[i];
    }
    for (std::size_t i = 0; i < d; ++i) x[i] = y[i] + q[i];
    scale_into_ball(x, center, radius);
    for (std::size_t i = 0; i < d; ++i) q[i] = y[i] + q[i] - x[i];

    double move2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double m = x[i] - prev[i];
      move2 += m * m;
    }
    if (std::sqrt(move2) < kMoveTol) {
      // Snap exactly feasible: clip, then scale toward the center (the
      // center lies in the box, so scaling stays inside it).
      std::vector<double> z = clip_entrywise(x, lo, hi);
      scale_into_ball(z, center, radius);
      return z;
    }
  }
  throw NumericalError("Dykstra projection did not converge within 500 sweeps");
}

}  // namespace

std::vector<double> capped_simplex_project(const std::vector<double>& x, int k,
                                           double bisection_tol) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  if (k < 0) throw PreconditionError("cap must be nonnegative");
  std::vector<double> y = clip_entrywise(x, 0.0, 1.0);
  double total = par::sum(n, [&](std::int64_t i) { return y[static_cast<std::size_t>(i)]; });
  if (total <= static_cast<double>(k)) return y;

  // KKT threshold: find tau with sum clip(x - tau, 0, 1) = k. The sum is
  // nonincreasing in tau; keep the invariant h(lo) > k >= h(hi) and return
  // the hi endpoint so the budget is satisfied exactly at the tolerance.
  const auto h = [&](double tau) {
    return par::sum(n, [&](std::int64_t i) {
      return std::clamp(x[static_cast<std::size_t>(i)] - tau, 0.0, 1.0);
    });
  };
  double lo = x[0], hi = x[0];
  for (double v : x) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  lo -= 1.0;  // h(lo) = n >= k
  for (int it = 0; it < 200 && hi - lo > bisection_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) > static_cast<double>(k))
      lo = mid;
    else
      hi = mid;
  }
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::clamp(x[i] - hi, 0.0, 1.0);
  return y;
}

bool FeasibleRegion::contains(const Vector& x, double tol) const {
  if (x.dimension() != dim_) return false;
  switch (kind_) {
    case Kind::kEuclideanBall: {
      double d2 = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double d = x[i] - center_[i];
        d2 += d * d;
      }
      return std::sqrt(d2) <= radius_ + tol;
    }
    case Kind::kBox:
      for (int i = 0; i < dim_; ++i)
        if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
      return true;
    case Kind::kProductOfBalls: {
      int off = 0;
      for (std::size_t b = 0; b < block_sizes_.size(); ++b) {
        double d2 = 0.0;
        for (int i = 0; i < block_sizes_[b]; ++i) {
          const double v = x[off + i];
          if (nonnegative_ && v < -tol) return false;
          d2 += v * v;
        }
        if (std::sqrt(d2) > block_radii_[b] + tol) return false;
        off += block_sizes_[b];
      }
      return true;
    }
    case Kind::kFrobeniusBallIntersectBox: {
      double d2 = 0.0;
      for (int i = 0; i < dim_; ++i) {
        if (x[i] < scalar_lower_ - tol || x[i] > scalar_upper_ + tol) return false;
        const double d = x[i] - center_[i];
        d2 += d * d;
      }
      return std::sqrt(d2) <= radius_ + tol;
    }
    case Kind::kCappedSimplex: {
      double total = 0.0;
      for (int i = 0; i < dim_; ++i) {
        if (x[i] < -tol || x[i] > 1.0 + tol) return false;
        total += x[i];
      }
      return total <= simplex_k_ + tol;
    }
  }
  return false;
}

Vector FeasibleRegion::project(const Vector& x) const {
  if (x.dimension() != dim_) throw PreconditionError("dimension mismatch");
  switch (kind_) {
    case Kind::kEuclideanBall: {
      std::vector<double> z = x.entries();
      scale_into_ball(z, center_.entries(), radius_);
      return Vector(std::move(z), x.block_sizes());
    }
    case Kind::kBox: {
      std::vector<double> z(x.entries());
      for (int i = 0; i < dim_; ++i) z[static_cast<std::size_t>(i)] = std::clamp(x[i], lower_[i], upper_[i]);
      return Vector(std::move(z), x.block_sizes());
    }
    case Kind::kProductOfBalls: {
      std::vector<double> z = x.entries();
      int off = 0;
      for (std::size_t b = 0; b < block_sizes_.size(); ++b) {
        const int m = block_sizes_[b];
        double d2 = 0.0;
        for (int i = 0; i < m; ++i) {
          double& v = z[static_cast<std::size_t>(off + i)];
          // Projection onto ball-meet-orthant: clip to the orthant first,
          // then scale radially (exact for origin-centered balls).
          if (nonnegative_ && v < 0.0) v = 0.0;
          d2 += v * v;
        }
        const double dist = std::sqrt(d2);
        if (dist > block_radii_[b]) {
          const double s = block_radii_[b] / dist;
          for (int i = 0; i < m; ++i) z[static_cast<std::size_t>(off + i)] *= s;
        }
        off += m;
      }
      return Vector(std::move(z), x.block_sizes());
    }
    case Kind::kFrobeniusBallIntersectBox:
      return Vector(dykstra_box_ball(x.entries(), center_.entries(), radius_, scalar_lower_,
                                     scalar_upper_),
                    x.block_sizes());
    case Kind::kCappedSimplex:
      return Vector(capped_simplex_project(x.entries(), simplex_k_, projection_tol_),
                    x.block_sizes());
  }
  throw PreconditionError("unknown region kind");
}

Vector project(const FeasibleRegion& region, const Vector& x) { return region.project(x); }

Vector gradient_step(const Objective& obj, const Vector& x, const SubsetSelection& s,
                     double gamma, const FeasibleRegion& region) {
  if (!(gamma > 0.0)) throw PreconditionError("step size must be positive");
  const Vector g = obj.grad_x(x, s);
  return region.project(axpy(x, -gamma, g));
}

InnerMinResult minimize_over_x(const Objective& obj, const SubsetSelection& s,
                               const FeasibleRegion& region, double tol, int max_iters,
                               std::optional<Vector> start) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  const double L = obj.smoothness();
  if (!(L > 0.0))
    throw PreconditionError("minimize_over_x needs a positive smoothness constant");
  const double step = 1.0 / L;

  InnerMinResult res;
  Vector x = start ? region.project(*start) : region.project(obj.initial_point());
  double residual = 0.0;
  int it = 0;
  for (; it < max_iters; ++it) {
    auto ctx = obj.context(x);
    const Vector g = ctx->grad(s);
    Vector next = region.project(axpy(x, -step, g));
    double move2 = 0.0;
    for (int i = 0; i < x.dimension(); ++i) {
      const double d = next[i] - x[i];
      move2 += d * d;
    }
    residual = std::sqrt(move2) * L;  // norm of the projected-gradient mapping
    x = std::move(next);
    if (residual <= tol) {
      ++it;
      res.converged = true;
      break;
    }
  }
  res.x = x;
  res.value = obj.value(x, s);
  res.iterations = it;
  res.projected_gradient_norm = residual;
  return res;
}

}  // namespace cvxsub
