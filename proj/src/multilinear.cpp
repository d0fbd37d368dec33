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

#include "cvxsub/multilinear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cvxsub/continuous.hpp"
#include "cvxsub/parallel.hpp"
#include "cvxsub/rng.hpp"

namespace cvxsub {

FractionalPoint::FractionalPoint(std::vector<double> y) : y_(std::move(y)) {
  for (double v : y_)
    if (!(v >= 0.0 && v <= 1.0))
      throw PreconditionError("fractional point entries must lie in [0,1]");
}

FractionalPoint FractionalPoint::zeros(int n) {
  return FractionalPoint(std::vector<double>(static_cast<std::size_t>(n), 0.0));
}

FractionalPoint FractionalPoint::corner(const SubsetSelection& s) {
  std::vector<double> y(static_cast<std::size_t>(s.ground_set_size()), 0.0);
  for (ElementId e : s.elements()) y[static_cast<std::size_t>(e)] = 1.0;
  return FractionalPoint(std::move(y));
}

namespace {

void check_extension_inputs(const Objective& obj, const Vector& x, const FractionalPoint& y) {
  if (x.dimension() != obj.dimension()) throw PreconditionError("x dimension mismatch");
  if (y.size() != obj.ground_set_size())
    throw PreconditionError("fractional point size must match the ground set");
}

void check_exact_size(int n) {
  if (n > kMaxExactExtensionGroundSet)
    throw SizeError("exact extension enumeration requires n <= 20");
}

// Probability of the subset encoded by mask under independent inclusion with
// probabilities y; exactly zero whenever some factor is zero.
double subset_probability(std::uint32_t mask, const std::vector<double>& y) {
  double p = 1.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double f = (mask >> i) & 1u ? y[i] : 1.0 - y[i];
    if (f == 0.0) return 0.0;
    p *= f;
  }
  return p;
}

// Draws the subset for sample index j; with antithetic pairing odd samples
// flip the uniforms of their even partner.
std::uint32_t draw_subset(const std::vector<double>& y, const EstimatorConfig& cfg, int j) {
  const bool flip = cfg.antithetic && (j % 2 == 1);
  const int base_index = flip ? j - 1 : j;
  auto eng = rng::make_engine(rng::derive_seed(cfg.seed, 0xA5u, static_cast<std::uint64_t>(base_index)));
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double u = rng::uniform_unit(eng);
    if (flip) u = 1.0 - u;
    if (u < y[i]) mask |= (1u << i);
  }
  return mask;
}

// f(x, S) for every subset mask, via one shared context. 2^n evaluations.
std::vector<double> value_table(const Objective& obj, const Vector& x) {
  const int n = obj.ground_set_size();
  auto ctx = obj.context(x);
  std::vector<double> table(static_cast<std::size_t>(1) << n, 0.0);
  par::for_each(static_cast<std::int64_t>(table.size()), [&](std::int64_t mask) {
    table[static_cast<std::size_t>(mask)] =
        ctx->value(SubsetSelection::from_mask(n, static_cast<std::uint32_t>(mask)));
  });
  return table;
}

std::vector<double> grad_y_from_table(const std::vector<double>& table,
                                      const std::vector<double>& y) {
  const int n = static_cast<int>(y.size());
  const std::int64_t full = static_cast<std::int64_t>(table.size());
  std::vector<double> gy(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << i;
    gy[static_cast<std::size_t>(i)] = par::sum(full, [&](std::int64_t mask) {
      if (mask & bit) return 0.0;
      double p = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double f = (mask >> j) & 1 ? y[static_cast<std::size_t>(j)] : 1.0 - y[static_cast<std::size_t>(j)];
        if (f == 0.0) return 0.0;
        p *= f;
      }
      return p * (table[static_cast<std::size_t>(mask | bit)] - table[static_cast<std::size_t>(mask)]);
    });
  }
  return gy;
}

}  // namespace

double extension_value_exact(const Objective& obj, const Vector& x, const FractionalPoint& y) {
  check_extension_inputs(obj, x, y);
  check_exact_size(obj.ground_set_size());
  const int n = obj.ground_set_size();
  auto ctx = obj.context(x);
  const std::int64_t full = static_cast<std::int64_t>(1) << n;
  return par::sum(full, [&](std::int64_t mask) {
    const double p = subset_probability(static_cast<std::uint32_t>(mask), y.values());
    if (p == 0.0) return 0.0;
    return p * ctx->value(SubsetSelection::from_mask(n, static_cast<std::uint32_t>(mask)));
  });
}

SampledEstimate extension_value_sampled(const Objective& obj, const Vector& x,
                                        const FractionalPoint& y, const EstimatorConfig& cfg) {
  check_extension_inputs(obj, x, y);
  if (cfg.samples < 2) throw PreconditionError("need at least 2 samples for a standard error");
  const int n = obj.ground_set_size();
  auto ctx = obj.context(x);
  std::vector<double> vals(static_cast<std::size_t>(cfg.samples), 0.0);
  par::for_each(cfg.samples, [&](std::int64_t j) {
    const std::uint32_t mask = draw_subset(y.values(), cfg, static_cast<int>(j));
    vals[static_cast<std::size_t>(j)] = ctx->value(SubsetSelection::from_mask(n, mask));
  });
  const double m = static_cast<double>(cfg.samples);
  const double mean = par::sum(cfg.samples, [&](std::int64_t j) { return vals[static_cast<std::size_t>(j)]; }) / m;
  const double ss = par::sum(cfg.samples, [&](std::int64_t j) {
    const double d = vals[static_cast<std::size_t>(j)] - mean;
    return d * d;
  });
  SampledEstimate out;
  out.estimate = mean;
  out.stderr_est = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
  out.samples = cfg.samples;
  return out;
}

ExtensionGradients extension_gradients_sampled(const Objective& obj, const Vector& x,
                                               const FractionalPoint& y,
                                               const EstimatorConfig& cfg) {
  check_extension_inputs(obj, x, y);
  if (cfg.samples < 1) throw PreconditionError("need at least 1 sample");
  const int n = obj.ground_set_size();
  const int d = obj.dimension();
  auto ctx = obj.context(x);

  // One subset sample serves every coordinate of grad_y and the grad_x term:
  // row = [per-coordinate f(x,S+i) - f(x,S-i) | grad_x f(x,S)].
  std::vector<double> totals = par::sum_vectors(cfg.samples, n + d, [&](std::int64_t j, std::vector<double>& row) {
    const std::uint32_t mask = draw_subset(y.values(), cfg, static_cast<int>(j));
    const SubsetSelection s = SubsetSelection::from_mask(n, mask);
    const double base = ctx->value(s);
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        row[static_cast<std::size_t>(i)] = base - ctx->value(s.without(i));
      } else {
        row[static_cast<std::size_t>(i)] = ctx->value(s.with(i)) - base;
      }
    }
    const Vector g = ctx->grad(s);
    for (int q = 0; q < d; ++q) row[static_cast<std::size_t>(n + q)] = g[q];
  });

  const double m = static_cast<double>(cfg.samples);
  ExtensionGradients out{Vector::zeros(d), std::vector<double>(static_cast<std::size_t>(n), 0.0)};
  for (int i = 0; i < n; ++i) out.grad_y[static_cast<std::size_t>(i)] = totals[static_cast<std::size_t>(i)] / m;
  std::vector<double> gx(static_cast<std::size_t>(d), 0.0);
  for (int q = 0; q < d; ++q) gx[static_cast<std::size_t>(q)] = totals[static_cast<std::size_t>(n + q)] / m;
  out.grad_x = Vector(std::move(gx), x.block_sizes());
  return out;
}

std::vector<double> grad_y_extension(const Objective& obj, const Vector& x,
                                     const FractionalPoint& y, const EstimatorConfig& cfg) {
  return extension_gradients_sampled(obj, x, y, cfg).grad_y;
}

Vector grad_x_extension(const Objective& obj, const Vector& x, const FractionalPoint& y,
                        const EstimatorConfig& cfg) {
  return extension_gradients_sampled(obj, x, y, cfg).grad_x;
}

std::vector<double> grad_y_extension_exact(const Objective& obj, const Vector& x,
                                           const FractionalPoint& y) {
  check_extension_inputs(obj, x, y);
  check_exact_size(obj.ground_set_size());
  return grad_y_from_table(value_table(obj, x), y.values());
}

Vector grad_x_extension_exact(const Objective& obj, const Vector& x, const FractionalPoint& y) {
  check_extension_inputs(obj, x, y);
  check_exact_size(obj.ground_set_size());
  const int n = obj.ground_set_size();
  const int d = obj.dimension();
  auto ctx = obj.context(x);
  const std::int64_t full = static_cast<std::int64_t>(1) << n;
  std::vector<double> gx = par::sum_vectors(full, d, [&](std::int64_t mask, std::vector<double>& row) {
    const double p = subset_probability(static_cast<std::uint32_t>(mask), y.values());
    if (p == 0.0) {
      std::fill(row.begin(), row.end(), 0.0);
      return;
    }
    const Vector g = ctx->grad(SubsetSelection::from_mask(n, static_cast<std::uint32_t>(mask)));
    for (int q = 0; q < d; ++q) row[static_cast<std::size_t>(q)] = p * g[q];
  });
  return Vector(std::move(gx), x.block_sizes());
}

ExtensionGradients extension_gradients_exact(const Objective& obj, const Vector& x,
                                             const FractionalPoint& y) {
  ExtensionGradients out{grad_x_extension_exact(obj, x, y),
                         grad_y_extension_exact(obj, x, y)};
  return out;
}

FractionalPoint project_polytope(const MatroidConstraint& c, const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != c.ground_set_size())
    throw PreconditionError("fractional point size must match the ground set");
  if (c.is_uniform()) return FractionalPoint(capped_simplex_project(y, c.uniform_k()));

  std::vector<double> out(y.size(), 0.0);
  for (int b = 0; b < c.num_blocks(); ++b) {
    std::vector<int> idx;
    for (ElementId e = 0; e < c.ground_set_size(); ++e)
      if (c.block_of(e) == b) idx.push_back(e);
    std::vector<double> sub(idx.size());
    for (std::size_t t = 0; t < idx.size(); ++t) sub[t] = y[static_cast<std::size_t>(idx[t])];
    const std::vector<double> proj =
        capped_simplex_project(sub, c.capacities()[static_cast<std::size_t>(b)]);
    for (std::size_t t = 0; t < idx.size(); ++t) out[static_cast<std::size_t>(idx[t])] = proj[t];
  }
  return FractionalPoint(std::move(out));
}

SubsetSelection round_fractional(const FractionalPoint& y, const MatroidConstraint& c) {
  const int n = c.ground_set_size();
  if (y.size() != n) throw PreconditionError("fractional point size must match the ground set");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (y[a] != y[b]) return y[a] > y[b];
    return a < b;
  });
  std::vector<ElementId> chosen;
  if (c.is_uniform()) {
    for (int i : order) {
      if (static_cast<int>(chosen.size()) >= c.uniform_k()) break;
      if (y[i] > 0.0) chosen.push_back(i);
    }
  } else {
    std::vector<int> counts(static_cast<std::size_t>(c.num_blocks()), 0);
    for (int i : order) {
      if (y[i] <= 0.0) continue;
      const int b = c.block_of(i);
      if (counts[static_cast<std::size_t>(b)] < c.capacities()[static_cast<std::size_t>(b)]) {
        ++counts[static_cast<std::size_t>(b)];
        chosen.push_back(i);
      }
    }
  }
  return SubsetSelection(n, std::move(chosen));
}

}  // namespace cvxsub
