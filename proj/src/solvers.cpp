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

#include "cvxsub/solvers.hpp"

#include <chrono>
#include <cmath>

#include "cvxsub/rng.hpp"

namespace cvxsub {

namespace {

constexpr double kOneMinusInvE = 0.6321205588285576784;  // 1 - 1/e

void check_instance(const Objective& obj, const MatroidConstraint& c,
                    const FeasibleRegion& region) {
  if (c.ground_set_size() != obj.ground_set_size())
    throw PreconditionError("objective/constraint ground-set mismatch");
  if (region.dimension() != obj.dimension())
    throw PreconditionError("objective/region dimension mismatch");
}

void check_config(const SolverConfig& cfg) {
  if (cfg.horizon < 1) throw PreconditionError("horizon must be at least 1");
  if (cfg.trace_every < 1) throw PreconditionError("trace stride must be at least 1");
}

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct WeightedAverage {
  explicit WeightedAverage(int dim) : acc(static_cast<std::size_t>(dim), 0.0) {}
  void add(double w, const Vector& x) {
    for (int i = 0; i < x.dimension(); ++i) acc[static_cast<std::size_t>(i)] += w * x[i];
    weight += w;
  }
  Vector result(const std::vector<int>& block_sizes) const {
    std::vector<double> out(acc);
    for (double& v : out) v /= weight;
    return Vector(std::move(out), block_sizes);
  }
  std::vector<double> acc;
  double weight = 0.0;
};

template <class F>
auto guarded(const char* algo, int t, const char* what, F&& f) {
  try {
    return f();
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(algo) + " aborted at iteration " + std::to_string(t) +
                         " (" + what + "): " + e.what());
  }
}

bool should_trace(int t, int horizon, int stride) {
  return (t - 1) % stride == 0 || t == horizon;
}

GuaranteeFlags make_flags(const Objective& obj, double alpha, bool needs_gradient_bound) {
  GuaranteeFlags fl;
  fl.alpha = alpha;
  fl.smoothness_available = std::isfinite(obj.smoothness());
  fl.gradient_bound_required = needs_gradient_bound;
  fl.gradient_bound_available = obj.gradient_bound().has_value();
  fl.certified =
      fl.smoothness_available && (!needs_gradient_bound || fl.gradient_bound_available);
  return fl;
}

}  // namespace

std::optional<double> default_extension_smoothness(const Objective& obj) {
  const auto b = obj.marginal_magnitude_bound();
  if (!b) return std::nullopt;
  return static_cast<double>(obj.ground_set_size()) * *b;
}

SolveResult solve_gg(const Objective& obj, const MatroidConstraint& c,
                     const FeasibleRegion& region, const SolverConfig& cfg) {
  check_instance(obj, c, region);
  check_config(cfg);
  const int n = obj.ground_set_size();
  const int T = cfg.horizon;

  SolveResult res;
  res.algorithm = "GG";
  res.horizon = T;
  res.trace_every = cfg.trace_every;
  res.seed = cfg.seed;
  res.guarantees = make_flags(obj, c.is_uniform() ? kOneMinusInvE : 0.5,
                              /*needs_gradient_bound=*/true);

  Vector x = region.project(obj.initial_point());
  SubsetSelection s = SubsetSelection::empty(n);
  SubsetSelection visited = s;
  WeightedAverage avg(obj.dimension());

  for (int t = 1; t <= T; ++t) {
    const double gamma = cfg.schedule.gamma(t, T);
    avg.add(gamma, x);
    visited = visited.union_with(s);

    const double t0 = now_ms();
    const std::uint64_t e0 = obj.evaluation_count();
    Vector x_next = guarded("GG", t, "x update", [&] {
      return region.project(axpy(x, -gamma, obj.grad_x(x, s)));
    });
    SubsetSelection s_next = greedy(obj, c, x_next).set;
    const double wall = now_ms() - t0;
    const std::uint64_t evals = obj.evaluation_count() - e0;

    if (should_trace(t, T, cfg.trace_every)) {
      IterationRecord rec;
      rec.t = t;
      rec.gamma = gamma;
      rec.x = x;
      rec.set = s;
      rec.wall_ms = wall;
      rec.evals = evals;
      res.trace.push_back(std::move(rec));
    }
    x = std::move(x_next);
    s = std::move(s_next);
  }
  res.x_sol = avg.result(x.block_sizes());
  res.visited_union = visited;
  return res;
}

SolveResult solve_egg(const Objective& obj, const MatroidConstraint& c,
                      const FeasibleRegion& region, const SolverConfig& cfg) {
  check_instance(obj, c, region);
  check_config(cfg);
  const int n = obj.ground_set_size();
  const int T = cfg.horizon;

  SolveResult res;
  res.algorithm = "EGG";
  res.horizon = T;
  res.trace_every = cfg.trace_every;
  res.seed = cfg.seed;
  res.guarantees = make_flags(obj, c.is_uniform() ? kOneMinusInvE : 0.5,
                              /*needs_gradient_bound=*/false);

  Vector x = region.project(obj.initial_point());
  SubsetSelection s = SubsetSelection::empty(n);
  SubsetSelection visited = s;
  WeightedAverage avg(obj.dimension());

  for (int t = 1; t <= T; ++t) {
    const double gamma = cfg.schedule.gamma(t, T);
    const double t0 = now_ms();
    const std::uint64_t e0 = obj.evaluation_count();

    Vector x_hat = guarded("EGG", t, "midpoint x update", [&] {
      return region.project(axpy(x, -gamma, obj.grad_x(x, s)));
    });
    SubsetSelection s_hat = greedy(obj, c, x_hat).set;
    Vector x_next = guarded("EGG", t, "x update", [&] {
      return region.project(axpy(x, -gamma, obj.grad_x(x_hat, s_hat)));
    });
    SubsetSelection s_next = greedy(obj, c, x_next).set;

    avg.add(gamma, x_hat);
    visited = visited.union_with(s).union_with(s_hat);
    const double wall = now_ms() - t0;
    const std::uint64_t evals = obj.evaluation_count() - e0;

    if (should_trace(t, T, cfg.trace_every)) {
      IterationRecord rec;
      rec.t = t;
      rec.gamma = gamma;
      rec.x = x;
      rec.x_hat = x_hat;
      rec.set = s;
      rec.set_hat = s_hat;
      rec.wall_ms = wall;
      rec.evals = evals;
      res.trace.push_back(std::move(rec));
    }
    x = std::move(x_next);
    s = std::move(s_next);
  }
  res.x_sol = avg.result(x.block_sizes());
  res.visited_union = visited;
  return res;
}

namespace {
void require_uniform(const MatroidConstraint& c, const char* algo) {
  if (!c.is_uniform())
    throw PreconditionError(std::string("unsupported constraint: ") + algo +
                            " requires a uniform (cardinality) constraint");
}
}  // namespace

SolveResult solve_grg(const Objective& obj, const MatroidConstraint& c,
                      const FeasibleRegion& region, const SolverConfig& cfg) {
  check_instance(obj, c, region);
  check_config(cfg);
  require_uniform(c, "GRG");
  const int n = obj.ground_set_size();
  const int k = c.uniform_k();
  const int T = cfg.horizon;

  SolveResult res;
  res.algorithm = "GRG";
  res.horizon = T;
  res.trace_every = cfg.trace_every;
  res.seed = cfg.seed;
  res.guarantees = make_flags(obj, 0.5, /*needs_gradient_bound=*/true);

  Vector x = region.project(obj.initial_point());
  SubsetSelection s = SubsetSelection::empty(n);
  SubsetSelection visited = s;
  WeightedAverage avg(obj.dimension());

  for (int t = 1; t <= T; ++t) {
    const double gamma = cfg.schedule.gamma(t, T);
    avg.add(gamma, x);
    visited = visited.union_with(s);

    const double t0 = now_ms();
    const std::uint64_t e0 = obj.evaluation_count();
    Vector x_next = guarded("GRG", t, "x update", [&] {
      return region.project(axpy(x, -gamma, obj.grad_x(x, s)));
    });
    SubsetSelection s_next = replacement_greedy(obj, k, x_next, s);
    const double wall = now_ms() - t0;
    const std::uint64_t evals = obj.evaluation_count() - e0;

    if (should_trace(t, T, cfg.trace_every)) {
      IterationRecord rec;
      rec.t = t;
      rec.gamma = gamma;
      rec.x = x;
      rec.set = s;
      rec.wall_ms = wall;
      rec.evals = evals;
      res.trace.push_back(std::move(rec));
    }
    x = std::move(x_next);
    s = std::move(s_next);
  }
  res.x_sol = avg.result(x.block_sizes());
  res.visited_union = visited;
  return res;
}

SolveResult solve_egrg(const Objective& obj, const MatroidConstraint& c,
                       const FeasibleRegion& region, const SolverConfig& cfg) {
  check_instance(obj, c, region);
  check_config(cfg);
  require_uniform(c, "EGRG");
  const int n = obj.ground_set_size();
  const int k = c.uniform_k();
  const int T = cfg.horizon;

  SolveResult res;
  res.algorithm = "EGRG";
  res.horizon = T;
  res.trace_every = cfg.trace_every;
  res.seed = cfg.seed;
  res.guarantees = make_flags(obj, 0.5, /*needs_gradient_bound=*/true);

  Vector x = region.project(obj.initial_point());
  SubsetSelection s = SubsetSelection::empty(n);
  SubsetSelection visited = s;
  WeightedAverage avg(obj.dimension());

  for (int t = 1; t <= T; ++t) {
    const double gamma = cfg.schedule.gamma(t, T);
    const double t0 = now_ms();
    const std::uint64_t e0 = obj.evaluation_count();

    Vector x_hat = guarded("EGRG", t, "midpoint x update", [&] {
      return region.project(axpy(x, -gamma, obj.grad_x(x, s)));
    });
    // The auxiliary set is computed at (x_t, S_t), as the algorithm is
    // printed; not at the midpoint.
    SubsetSelection s_hat = replacement_greedy(obj, k, x, s);
    Vector x_next = guarded("EGRG", t, "x update", [&] {
      return region.project(axpy(x, -gamma, obj.grad_x(x_hat, s_hat)));
    });
    SubsetSelection s_next = replacement_greedy(obj, k, x_hat, s_hat);

    avg.add(gamma, x_hat);
    visited = visited.union_with(s).union_with(s_hat);
    const double wall = now_ms() - t0;
    const std::uint64_t evals = obj.evaluation_count() - e0;

    if (should_trace(t, T, cfg.trace_every)) {
      IterationRecord rec;
      rec.t = t;
      rec.gamma = gamma;
      rec.x = x;
      rec.x_hat = x_hat;
      rec.set = s;
      rec.set_hat = s_hat;
      rec.wall_ms = wall;
      rec.evals = evals;
      res.trace.push_back(std::move(rec));
    }
    x = std::move(x_next);
    s = std::move(s_next);
  }
  res.x_sol = avg.result(x.block_sizes());
  res.visited_union = visited;
  return res;
}

SolveResult solve_egce(const Objective& obj, const MatroidConstraint& c,
                       const FeasibleRegion& region, const SolverConfig& cfg) {
  check_instance(obj, c, region);
  check_config(cfg);
  const int n = obj.ground_set_size();
  const int T = cfg.horizon;

  if (!cfg.schedule.is_constant() && !cfg.allow_unsafe_step)
    throw ConfigError("EGCE requires a constant step schedule");
  double l_y = 0.0;
  if (cfg.l_y_override) {
    l_y = *cfg.l_y_override;
  } else {
    const auto derived = default_extension_smoothness(obj);
    if (!derived)
      throw ConfigError(
          "EGCE cannot derive an extension smoothness bound for this objective; "
          "set l_y_override");
    l_y = *derived;
  }
  const double l_max = std::max(obj.smoothness(), l_y);
  const double gamma0 = cfg.schedule.gamma(1, T);
  const bool step_ok = l_max <= 0.0 || gamma0 <= 1.0 / l_max + 1e-15;
  if (!step_ok && !cfg.allow_unsafe_step)
    throw ConfigError("EGCE step exceeds 1/max(L_x, L_y); set allow_unsafe_step to override");
  if (cfg.exact_extension && n > kMaxExactExtensionGroundSet)
    throw SizeError("exact extension mode requires n <= 20");

  SolveResult res;
  res.algorithm = "EGCE";
  res.horizon = T;
  res.trace_every = cfg.trace_every;
  res.seed = cfg.seed;
  res.guarantees = make_flags(obj, 0.5, /*needs_gradient_bound=*/true);
  res.guarantees.step_condition_verified = step_ok && cfg.schedule.is_constant();
  res.guarantees.certified = res.guarantees.certified && res.guarantees.step_condition_verified;

  const std::uint64_t stream_base = cfg.estimator.seed ^ rng::splitmix64(cfg.seed);
  const auto gradients = [&](const Vector& xx, const std::vector<double>& yy, int t, int phase) {
    const FractionalPoint fp(yy);
    if (cfg.exact_extension) return extension_gradients_exact(obj, xx, fp);
    EstimatorConfig est = cfg.estimator;
    est.seed = rng::derive_seed(stream_base, static_cast<std::uint64_t>(t),
                                static_cast<std::uint64_t>(phase));
    return extension_gradients_sampled(obj, xx, fp, est);
  };
  const auto ascend_y = [&](const std::vector<double>& yy, double gamma,
                            const std::vector<double>& gy, int t) {
    std::vector<double> raw(yy);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      raw[i] += gamma * gy[i];
      if (!std::isfinite(raw[i]))
        throw NumericalError("EGCE aborted at iteration " + std::to_string(t) +
                             " (y update): non-finite entry");
    }
    return project_polytope(c, raw).values();
  };

  Vector x = region.project(obj.initial_point());
  std::vector<double> y(static_cast<std::size_t>(n), 0.0);
  SubsetSelection visited = SubsetSelection::empty(n);
  WeightedAverage avg(obj.dimension());

  for (int t = 1; t <= T; ++t) {
    const double gamma = cfg.schedule.gamma(t, T);
    const double t0 = now_ms();
    const std::uint64_t e0 = obj.evaluation_count();

    const ExtensionGradients g1 = gradients(x, y, t, 0);
    Vector x_hat = guarded("EGCE", t, "midpoint x update", [&] {
      return region.project(axpy(x, -gamma, g1.grad_x));
    });
    const std::vector<double> y_hat = ascend_y(y, gamma, g1.grad_y, t);

    const ExtensionGradients g2 = gradients(x_hat, y_hat, t, 1);
    Vector x_next = guarded("EGCE", t, "x update", [&] {
      return region.project(axpy(x, -gamma, g2.grad_x));
    });
    const std::vector<double> y_next = ascend_y(y, gamma, g2.grad_y, t);

    avg.add(gamma, x_hat);
    const SubsetSelection rounded = round_fractional(FractionalPoint(y), c);
    const SubsetSelection rounded_hat = round_fractional(FractionalPoint(y_hat), c);
    visited = visited.union_with(rounded).union_with(rounded_hat);
    const double wall = now_ms() - t0;
    const std::uint64_t evals = obj.evaluation_count() - e0;

    if (should_trace(t, T, cfg.trace_every)) {
      IterationRecord rec;
      rec.t = t;
      rec.gamma = gamma;
      rec.x = x;
      rec.x_hat = x_hat;
      rec.set = rounded;
      rec.set_hat = rounded_hat;
      rec.y = y;
      rec.y_hat = y_hat;
      rec.wall_ms = wall;
      rec.evals = evals;
      res.trace.push_back(std::move(rec));
    }
    x = std::move(x_next);
    y = y_next;
  }
  res.x_sol = avg.result(x.block_sizes());
  res.visited_union = visited;
  return res;
}

MaxMinExtraction extract_maxmin_solution(const SolveResult& result, const Objective& obj,
                                         const FeasibleRegion& region, double tol,
                                         int max_iters) {
  if (result.visited_union.is_empty())
    throw PreconditionError("result carries an empty visited-set union");
  MaxMinExtraction out;
  out.set = result.visited_union;
  out.inner = minimize_over_x(obj, out.set, region, tol, max_iters);
  out.value = out.inner.value;
  return out;
}

}  // namespace cvxsub
