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

#include "cvxsub/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cvxsub::serial_ref {

namespace {

double pair_score(const ConvexFacilityLocationSpec& spec, const std::vector<double>& x, int i,
                  int j) {
  const int m = spec.block_size;
  const double* q = spec.q[static_cast<std::size_t>(i) * spec.num_blocks + j].data();
  const double* xi = x.data() + static_cast<std::ptrdiff_t>(i) * m;
  const double* xj = x.data() + static_cast<std::ptrdiff_t>(j) * m;
  double acc = 0.0;
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) acc += xi[r] * q[static_cast<std::size_t>(r) * m + c] * xj[c];
  return acc;
}

double regularizer(const ConvexFacilityLocationSpec& spec, const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return spec.lambda / std::max(s, spec.denominator_floor);
}

}  // namespace

double facility_value(const ConvexFacilityLocationSpec& spec, const std::vector<double>& x,
                      const SubsetSelection& s) {
  double acc = 0.0;
  for (int i = 0; i < spec.num_blocks; ++i) {
    if (s.is_empty()) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (ElementId j : s.elements()) best = std::max(best, pair_score(spec, x, i, j));
    acc += best;
  }
  return acc + regularizer(spec, x);
}

std::vector<double> facility_grad(const ConvexFacilityLocationSpec& spec,
                                  const std::vector<double>& x, const SubsetSelection& s) {
  const int m = spec.block_size;
  const int n = spec.num_blocks;
  std::vector<double> g(x.size(), 0.0);
  for (int i = 0; i < n && !s.is_empty(); ++i) {
    int jstar = s.elements()[0];
    double best = pair_score(spec, x, i, jstar);
    for (std::size_t t = 1; t < s.elements().size(); ++t) {
      const double v = pair_score(spec, x, i, s.elements()[t]);
      if (v > best) {
        best = v;
        jstar = s.elements()[t];
      }
    }
    const double* q = spec.q[static_cast<std::size_t>(i) * n + jstar].data();
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        g[static_cast<std::size_t>(i) * m + r] +=
            q[static_cast<std::size_t>(r) * m + c] * x[static_cast<std::size_t>(jstar) * m + c];
        g[static_cast<std::size_t>(jstar) * m + c] +=
            q[static_cast<std::size_t>(r) * m + c] * x[static_cast<std::size_t>(i) * m + r];
      }
  }
  double ssum = 0.0;
  for (double v : x) ssum += v * v;
  if (ssum > spec.denominator_floor) {
    const double coef = -2.0 * spec.lambda / (ssum * ssum);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] += coef * x[i];
  }
  return g;
}

double attack_value(const RecommenderAttackSpec& spec, const std::vector<double>& x,
                    const SubsetSelection& s) {
  if (s.is_empty()) return 0.0;
  double acc = 0.0;
  for (int u = 0; u < spec.users; ++u) {
    double best = -std::numeric_limits<double>::infinity();
    for (ElementId j : s.elements())
      best = std::max(best, x[static_cast<std::size_t>(u) * spec.items + j]);
    acc += best;
  }
  return acc / spec.users;
}

double modular_value(const ModularQuadraticSpec& spec, const std::vector<double>& x,
                     const SubsetSelection& s) {
  double acc = spec.q_constant;
  if (spec.q_coef > 0.0) {
    double d2 = 0.0;
    for (int i = 0; i < spec.dimension; ++i) {
      const double d = x[static_cast<std::size_t>(i)] -
                       (spec.q_center.empty() ? 0.0 : spec.q_center[static_cast<std::size_t>(i)]);
      d2 += d * d;
    }
    acc += spec.q_coef * d2;
  }
  for (ElementId e : s.elements()) {
    acc += spec.a[static_cast<std::size_t>(e)];
    if (spec.b[static_cast<std::size_t>(e)] > 0.0) {
      double d2 = 0.0;
      for (int i = 0; i < spec.dimension; ++i) {
        const double d = x[static_cast<std::size_t>(i)] -
                         spec.centers[static_cast<std::size_t>(e)][static_cast<std::size_t>(i)];
        d2 += d * d;
      }
      acc += spec.b[static_cast<std::size_t>(e)] * d2;
    }
  }
  return acc;
}

SubsetSelection greedy(const Objective& obj, const MatroidConstraint& c, const Vector& x) {
  SubsetSelection s = SubsetSelection::empty(obj.ground_set_size());
  auto ctx = obj.context(x);
  double current = ctx->value(s);
  for (;;) {
    const std::vector<ElementId> cands = c.feasible_additions(s);
    if (cands.empty()) break;
    ElementId best_e = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (ElementId e : cands) {
      const double gain = ctx->value(s.with(e)) - current;
      if (gain > best_gain) {
        best_gain = gain;
        best_e = e;
      }
    }
    s = s.with(best_e);
    current += best_gain;
  }
  return s;
}

namespace {

void enumerate_rec(const MatroidConstraint& c, SubsetSelection& s, ElementId next,
                   const Objective::Context& ctx, SubsetSelection& best, double& best_value) {
  const double v = ctx.value(s);
  if (v > best_value) {
    best_value = v;
    best = s;
  }
  for (ElementId e = next; e < c.ground_set_size(); ++e) {
    SubsetSelection t = s.with(e);
    if (!c.is_independent(t)) continue;
    enumerate_rec(c, t, e + 1, ctx, best, best_value);
  }
}

}  // namespace

std::pair<SubsetSelection, double> brute_force_max(const Objective& obj,
                                                   const MatroidConstraint& c, const Vector& x) {
  auto ctx = obj.context(x);
  SubsetSelection s = SubsetSelection::empty(obj.ground_set_size());
  SubsetSelection best = s;
  double best_value = -std::numeric_limits<double>::infinity();
  enumerate_rec(c, s, 0, *ctx, best, best_value);
  return {best, best_value};
}

double extension_value(const Objective& obj, const Vector& x, const FractionalPoint& y) {
  const int n = obj.ground_set_size();
  auto ctx = obj.context(x);
  double acc = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= (mask >> i) & 1u ? y[i] : 1.0 - y[i];
    if (p == 0.0) continue;
    acc += p * ctx->value(SubsetSelection::from_mask(n, mask));
  }
  return acc;
}

std::vector<double> capped_simplex_project(const std::vector<double>& x, int k) {
  const std::size_t n = x.size();
  std::vector<double> y(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = std::clamp(x[i], 0.0, 1.0);
    total += y[i];
  }
  if (total <= static_cast<double>(k)) return y;

  // h(tau) = sum clip(x - tau, 0, 1) is piecewise linear with breakpoints at
  // x_i and x_i - 1; find the segment where it crosses k and solve exactly.
  std::vector<double> bps;
  bps.reserve(2 * n);
  for (double v : x) {
    bps.push_back(v);
    bps.push_back(v - 1.0);
  }
  std::sort(bps.begin(), bps.end());
  const auto h = [&](double tau) {
    double s = 0.0;
    for (double v : x) s += std::clamp(v - tau, 0.0, 1.0);
    return s;
  };
  double lo = bps.front(), hi = bps.back();
  for (double bp : bps) {
    const double hv = h(bp);
    if (hv > static_cast<double>(k))
      lo = std::max(lo, bp);
    else
      hi = std::min(hi, bp);
  }
  // Between lo and hi the active set is fixed; interpolate linearly.
  const double hlo = h(lo);
  const double hhi = h(hi);
  double tau = lo;
  if (hlo != hhi) tau = lo + (hlo - static_cast<double>(k)) * (hi - lo) / (hlo - hhi);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::clamp(x[i] - tau, 0.0, 1.0);
  return y;
}

}  // namespace cvxsub::serial_ref
