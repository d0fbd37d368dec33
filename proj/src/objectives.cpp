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

#include "cvxsub/objectives.hpp"

#include <algorithm>
#include <cmath>

#include "cvxsub/parallel.hpp"

namespace cvxsub {

Objective::Objective(std::string name, int dim, int ground_set_size)
    : name_(std::move(name)),
      dim_(dim),
      n_(ground_set_size),
      initial_point_(Vector::zeros(dim)),
      counters_(std::make_shared<Counters>()) {}

void Objective::check_inputs(const Vector& x, const SubsetSelection& s) const {
  if (x.dimension() != dim_) throw PreconditionError("x dimension mismatch");
  if (s.ground_set_size() != n_) throw PreconditionError("ground-set size mismatch");
}

Objective::Context::Context(const Objective& obj) : obj_(obj), base_(obj.ground_set_size()) {}

void Objective::Context::count_eval() const {
  obj_.counters_->evals.fetch_add(1, std::memory_order_relaxed);
}

double Objective::Context::value(const SubsetSelection& s) const {
  if (s.ground_set_size() != obj_.n_) throw PreconditionError("ground-set size mismatch");
  count_eval();
  return value_impl(s);
}

Vector Objective::Context::grad(const SubsetSelection& s) const {
  if (s.ground_set_size() != obj_.n_) throw PreconditionError("ground-set size mismatch");
  obj_.counters_->grads.fetch_add(1, std::memory_order_relaxed);
  return grad_impl(s);
}

void Objective::Context::set_base(const SubsetSelection& s) {
  if (s.ground_set_size() != obj_.n_) throw PreconditionError("ground-set size mismatch");
  base_ = s;
  count_eval();
  rebuild_base_cache();
}

double Objective::Context::gain(ElementId e) const {
  if (e < 0 || e >= obj_.n_) throw PreconditionError("element id out of range");
  if (base_.contains(e)) throw PreconditionError("element already in base set");
  count_eval();
  return gain_impl(e);
}

void Objective::Context::advance_base(ElementId e) {
  if (base_.contains(e)) throw PreconditionError("element already in base set");
  advance_base_cache(e);
  base_ = base_.with(e);
}

std::unique_ptr<Objective::Context> Objective::context(const Vector& x) const {
  if (x.dimension() != dim_) throw PreconditionError("x dimension mismatch");
  return make_context(x);
}

double Objective::value(const Vector& x, const SubsetSelection& s) const {
  check_inputs(x, s);
  return context(x)->value(s);
}

Vector Objective::grad_x(const Vector& x, const SubsetSelection& s) const {
  check_inputs(x, s);
  return context(x)->grad(s);
}

double Objective::marginal_gain(const Vector& x, const SubsetSelection& s, ElementId e) const {
  check_inputs(x, s);
  if (s.contains(e)) throw PreconditionError("element already in subset");
  auto ctx = context(x);
  ctx->set_base(s);
  return ctx->gain(e);
}

double value(const Objective& obj, const Vector& x, const SubsetSelection& s) {
  return obj.value(x, s);
}
Vector grad_x(const Objective& obj, const Vector& x, const SubsetSelection& s) {
  return obj.grad_x(x, s);
}
double marginal_gain(const Objective& obj, const Vector& x, const SubsetSelection& s, ElementId e) {
  return obj.marginal_gain(x, s, e);
}

namespace {

// y = A x for a dense row-major m x m matrix.
void matvec(const double* a, const double* x, double* y, int m) {
  for (int r = 0; r < m; ++r) {
    double acc = 0.0;
    const double* row = a + static_cast<std::ptrdiff_t>(r) * m;
    for (int c = 0; c < m; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

// y = A^T x.
void matvec_t(const double* a, const double* x, double* y, int m) {
  for (int c = 0; c < m; ++c) y[c] = 0.0;
  for (int r = 0; r < m; ++r) {
    const double* row = a + static_cast<std::ptrdiff_t>(r) * m;
    for (int c = 0; c < m; ++c) y[c] += row[c] * x[r];
  }
}

double quadratic_form(const double* a, const double* xi, const double* xj, int m) {
  double acc = 0.0;
  for (int r = 0; r < m; ++r) {
    double rowdot = 0.0;
    const double* row = a + static_cast<std::ptrdiff_t>(r) * m;
    for (int c = 0; c < m; ++c) rowdot += row[c] * xj[c];
    acc += xi[r] * rowdot;
  }
  return acc;
}

bool cholesky_succeeds(std::vector<double> a, int m) {
  for (int j = 0; j < m; ++j) {
    double d = a[static_cast<std::size_t>(j) * m + j];
    for (int k = 0; k < j; ++k) {
      const double l = a[static_cast<std::size_t>(j) * m + k];
      d -= l * l;
    }
    if (d <= 0.0) return false;
    const double lj = std::sqrt(d);
    a[static_cast<std::size_t>(j) * m + j] = lj;
    for (int i = j + 1; i < m; ++i) {
      double v = a[static_cast<std::size_t>(i) * m + j];
      for (int k = 0; k < j; ++k)
        v -= a[static_cast<std::size_t>(i) * m + k] * a[static_cast<std::size_t>(j) * m + k];
      a[static_cast<std::size_t>(i) * m + j] = v / lj;
    }
  }
  return true;
}

}  // namespace

double symmetric_spectral_norm(const std::vector<double>& a, int m) {
  if (m <= 0) return 0.0;
  std::vector<double> v(static_cast<std::size_t>(m), 1.0 / std::sqrt(static_cast<double>(m)));
  std::vector<double> w(static_cast<std::size_t>(m), 0.0);
  double lambda = 0.0;
  for (int it = 0; it < 50; ++it) {
    matvec(a.data(), v.data(), w.data(), m);
    double wn = 0.0;
    for (double e : w) wn += e * e;
    wn = std::sqrt(wn);
    if (wn == 0.0) return 0.0;
    for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / wn;
    if (std::abs(wn - lambda) <= 1e-8 * std::max(1.0, wn)) return wn;
    lambda = wn;
  }
  return lambda;
}

// ---------------------------------------------------------------------------
// Convex facility location, Eq. of the synthetic benchmark family.

class FacilityLocationObjective : public Objective {
 public:
  explicit FacilityLocationObjective(ConvexFacilityLocationSpec spec, double max_q_norm)
      : Objective("convex_facility_location",
                  spec.block_size * spec.num_blocks, spec.num_blocks),
        spec_(std::move(spec)),
        max_q_norm_(max_q_norm) {
    const int m = spec_.block_size;
    const int n = spec_.num_blocks;
    // Operating shell for the regularizer bounds: blocks of norm 0.5, the
    // solver initialization for this family.
    const double s_ref = std::max(spec_.denominator_floor, 0.25 * n);
    smoothness_ = 2.0 * max_q_norm_ + 10.0 * spec_.lambda / (s_ref * s_ref);
    gradient_bound_ = max_q_norm_ * (n + 2) + 2.0 * spec_.lambda / std::pow(s_ref, 1.5);
    std::vector<double> x0(static_cast<std::size_t>(dim_), 0.5 / std::sqrt(static_cast<double>(m)));
    initial_point_ = Vector(std::move(x0), std::vector<int>(static_cast<std::size_t>(n), m));
  }

  const ConvexFacilityLocationSpec& spec() const { return spec_; }
  double max_q_norm() const { return max_q_norm_; }

  // Largest marginal on the unit product-of-balls region: adding e from the
  // empty set contributes at most n * max ||Q||.
  std::optional<double> marginal_magnitude_bound() const override {
    return spec_.num_blocks * max_q_norm_;
  }

  const double* q(int i, int j) const {
    return spec_.q[static_cast<std::size_t>(i) * spec_.num_blocks + j].data();
  }

  class Ctx : public Context {
   public:
    Ctx(const FacilityLocationObjective& obj, const Vector& x)
        : Context(obj), fobj_(obj), x_(x) {
      const int n = fobj_.spec_.num_blocks;
      const int m = fobj_.spec_.block_size;
      scores_.assign(static_cast<std::size_t>(n) * n, 0.0);
      // Pair-score table: the per-x cache every set query reads.
      par::for_each(static_cast<std::int64_t>(n) * n, [&](std::int64_t p) {
        const int i = static_cast<int>(p / n);
        const int j = static_cast<int>(p % n);
        scores_[static_cast<std::size_t>(p)] =
            quadratic_form(fobj_.q(i, j), x_.entries().data() + static_cast<std::ptrdiff_t>(i) * m,
                           x_.entries().data() + static_cast<std::ptrdiff_t>(j) * m, m);
      });
      sum_sq_ = 0.0;
      for (double e : x_.entries()) sum_sq_ += e * e;
      reg_value_ = fobj_.spec_.lambda / std::max(sum_sq_, fobj_.spec_.denominator_floor);
      row_max_.assign(static_cast<std::size_t>(n), 0.0);
      rebuild_base_cache();
    }

    double score(int i, int j) const {
      return scores_[static_cast<std::size_t>(i) * fobj_.spec_.num_blocks + j];
    }

   protected:
    double value_impl(const SubsetSelection& s) const override {
      const int n = fobj_.spec_.num_blocks;
      if (s.is_empty()) return reg_value_;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        double best = score(i, s.elements()[0]);
        for (std::size_t t = 1; t < s.elements().size(); ++t)
          best = std::max(best, score(i, s.elements()[t]));
        acc += best;
      }
      return acc + reg_value_;
    }

    Vector grad_impl(const SubsetSelection& s) const override {
      const int n = fobj_.spec_.num_blocks;
      const int m = fobj_.spec_.block_size;
      std::vector<double> g(static_cast<std::size_t>(fobj_.dimension()), 0.0);
      std::vector<double> tmp(static_cast<std::size_t>(m), 0.0);
      if (!s.is_empty()) {
        for (int i = 0; i < n; ++i) {
          // Fixed subgradient selection: the argmax with the smallest index.
          int jstar = s.elements()[0];
          double best = score(i, jstar);
          for (std::size_t t = 1; t < s.elements().size(); ++t) {
            const int j = s.elements()[t];
            if (score(i, j) > best) {
              best = score(i, j);
              jstar = j;
            }
          }
          const double* xi = x_.entries().data() + static_cast<std::ptrdiff_t>(i) * m;
          const double* xj = x_.entries().data() + static_cast<std::ptrdiff_t>(jstar) * m;
          matvec(fobj_.q(i, jstar), xj, tmp.data(), m);
          for (int r = 0; r < m; ++r) g[static_cast<std::size_t>(i) * m + r] += tmp[static_cast<std::size_t>(r)];
          matvec_t(fobj_.q(i, jstar), xi, tmp.data(), m);
          for (int r = 0; r < m; ++r) g[static_cast<std::size_t>(jstar) * m + r] += tmp[static_cast<std::size_t>(r)];
        }
      }
      // Floored regularizer: constant (zero gradient) below the floor.
      if (sum_sq_ > fobj_.spec_.denominator_floor) {
        const double coef = -2.0 * fobj_.spec_.lambda / (sum_sq_ * sum_sq_);
        for (int i = 0; i < fobj_.dimension(); ++i) g[static_cast<std::size_t>(i)] += coef * x_[i];
      }
      return Vector(std::move(g), x_.block_sizes());
    }

    void rebuild_base_cache() override {
      const int n = fobj_.spec_.num_blocks;
      if (base_.is_empty()) {
        std::fill(row_max_.begin(), row_max_.end(), 0.0);
        base_value_ = reg_value_;
        return;
      }
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        double best = score(i, base_.elements()[0]);
        for (std::size_t t = 1; t < base_.elements().size(); ++t)
          best = std::max(best, score(i, base_.elements()[t]));
        row_max_[static_cast<std::size_t>(i)] = best;
        acc += best;
      }
      base_value_ = acc + reg_value_;
    }

    double gain_impl(ElementId e) const override { return delta(e); }

    void advance_base_cache(ElementId e) override {
      const int n = fobj_.spec_.num_blocks;
      base_value_ += delta(e);
      for (int i = 0; i < n; ++i) {
        const double v = score(i, e);
        if (base_.is_empty() || v > row_max_[static_cast<std::size_t>(i)])
          row_max_[static_cast<std::size_t>(i)] = v;
      }
    }

   private:
    double delta(ElementId e) const {
      const int n = fobj_.spec_.num_blocks;
      double acc = 0.0;
      if (base_.is_empty()) {
        for (int i = 0; i < n; ++i) acc += score(i, e);
      } else {
        for (int i = 0; i < n; ++i)
          acc += std::max(0.0, score(i, e) - row_max_[static_cast<std::size_t>(i)]);
      }
      return acc;
    }

    const FacilityLocationObjective& fobj_;
    Vector x_;
    std::vector<double> scores_;   // n x n pair scores at this x
    std::vector<double> row_max_;  // per-row max over the base set
    double reg_value_ = 0.0;
    double sum_sq_ = 0.0;
  };

 protected:
  std::unique_ptr<Context> make_context(const Vector& x) const override {
    return std::make_unique<Ctx>(*this, x);
  }

 private:
  ConvexFacilityLocationSpec spec_;
  double max_q_norm_;
};

std::shared_ptr<Objective> build_convex_facility_location(const ConvexFacilityLocationSpec& spec) {
  const int m = spec.block_size;
  const int n = spec.num_blocks;
  if (m <= 0 || n <= 0) throw PreconditionError("block size and count must be positive");
  if (spec.lambda <= 0.0) throw PreconditionError("lambda must be positive");
  if (spec.denominator_floor <= 0.0) throw PreconditionError("denominator floor must be positive");
  if (spec.q.size() != static_cast<std::size_t>(n) * n)
    throw PreconditionError("expected n*n pair matrices");
  double max_norm = 0.0;
  for (const auto& q : spec.q) {
    if (q.size() != static_cast<std::size_t>(m) * m)
      throw PreconditionError("pair matrix has wrong shape");
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        const double v = q[static_cast<std::size_t>(r) * m + c];
        if (!(v > 0.0)) throw PreconditionError("pair matrices must have positive entries");
        if (std::abs(v - q[static_cast<std::size_t>(c) * m + r]) > 1e-8)
          throw PreconditionError("pair matrices must be symmetric within 1e-8");
      }
    }
    std::vector<double> shifted = q;
    // PSD within 1e-8: the shifted matrix must admit a Cholesky factor.
    for (int r = 0; r < m; ++r) shifted[static_cast<std::size_t>(r) * m + r] += 1e-8 * (1.0 + 1e-6);
    if (!cholesky_succeeds(shifted, m))
      throw PreconditionError("pair matrices must be PSD within 1e-8");
    max_norm = std::max(max_norm, symmetric_spectral_norm(q, m));
  }
  return std::make_shared<FacilityLocationObjective>(spec, max_norm);
}

const ConvexFacilityLocationSpec& facility_spec(const Objective& obj) {
  const auto* f = dynamic_cast<const FacilityLocationObjective*>(&obj);
  if (!f) throw PreconditionError("not a facility-location objective");
  return f->spec();
}

// ---------------------------------------------------------------------------
// Recommender-attack utility h(X', S).

class RecommenderAttackObjective : public Objective {
 public:
  explicit RecommenderAttackObjective(RecommenderAttackSpec spec)
      : Objective("recommender_attack", spec.users * spec.items, spec.items),
        spec_(std::move(spec)) {
    smoothness_ = 0.0;  // h is piecewise linear in X'
    gradient_bound_ = 1.0 / std::sqrt(static_cast<double>(spec_.users));
    initial_point_ = Vector(spec_.baseline);
  }

  const RecommenderAttackSpec& spec() const { return spec_; }

  // A new column raises each user's max by at most the rating ceiling.
  std::optional<double> marginal_magnitude_bound() const override {
    return spec_.rating_upper;
  }

  class Ctx : public Context {
   public:
    Ctx(const RecommenderAttackObjective& obj, const Vector& x) : Context(obj), aobj_(obj), x_(x) {
      row_max_.assign(static_cast<std::size_t>(aobj_.spec_.users), 0.0);
      rebuild_base_cache();
    }

   protected:
    double value_impl(const SubsetSelection& s) const override {
      if (s.is_empty()) return 0.0;
      const int u = aobj_.spec_.users;
      const int v = aobj_.spec_.items;
      const double total = par::sum(u, [&](std::int64_t r) {
        const double* row = x_.entries().data() + r * v;
        double best = row[s.elements()[0]];
        for (std::size_t t = 1; t < s.elements().size(); ++t)
          best = std::max(best, row[s.elements()[t]]);
        return best;
      });
      return total / u;
    }

    Vector grad_impl(const SubsetSelection& s) const override {
      const int u = aobj_.spec_.users;
      const int v = aobj_.spec_.items;
      std::vector<double> g(static_cast<std::size_t>(aobj_.dimension()), 0.0);
      if (!s.is_empty()) {
        const double w = 1.0 / u;
        par::for_each(u, [&](std::int64_t r) {
          const double* row = x_.entries().data() + r * v;
          int jstar = s.elements()[0];
          double best = row[jstar];
          for (std::size_t t = 1; t < s.elements().size(); ++t) {
            const int j = s.elements()[t];
            if (row[j] > best) {
              best = row[j];
              jstar = j;
            }
          }
          g[static_cast<std::size_t>(r) * v + jstar] = w;
        });
      }
      return Vector(std::move(g));
    }

    void rebuild_base_cache() override {
      const int u = aobj_.spec_.users;
      const int v = aobj_.spec_.items;
      if (base_.is_empty()) {
        std::fill(row_max_.begin(), row_max_.end(), 0.0);
        base_value_ = 0.0;
        return;
      }
      double acc = 0.0;
      for (int r = 0; r < u; ++r) {
        const double* row = x_.entries().data() + static_cast<std::ptrdiff_t>(r) * v;
        double best = row[base_.elements()[0]];
        for (std::size_t t = 1; t < base_.elements().size(); ++t)
          best = std::max(best, row[base_.elements()[t]]);
        row_max_[static_cast<std::size_t>(r)] = best;
        acc += best;
      }
      base_value_ = acc / u;
    }

    double gain_impl(ElementId e) const override { return delta(e); }

    void advance_base_cache(ElementId e) override {
      const int u = aobj_.spec_.users;
      const int v = aobj_.spec_.items;
      base_value_ += delta(e);
      for (int r = 0; r < u; ++r) {
        const double val = x_.entries()[static_cast<std::size_t>(r) * v + e];
        if (base_.is_empty() || val > row_max_[static_cast<std::size_t>(r)])
          row_max_[static_cast<std::size_t>(r)] = val;
      }
    }

   private:
    double delta(ElementId e) const {
      const int u = aobj_.spec_.users;
      const int v = aobj_.spec_.items;
      const bool empty = base_.is_empty();
      const double total = par::sum(u, [&](std::int64_t r) {
        const double val = x_.entries()[static_cast<std::size_t>(r) * v + e];
        return empty ? val : std::max(0.0, val - row_max_[static_cast<std::size_t>(r)]);
      });
      return total / u;
    }

    const RecommenderAttackObjective& aobj_;
    Vector x_;
    std::vector<double> row_max_;
  };

 protected:
  std::unique_ptr<Context> make_context(const Vector& x) const override {
    return std::make_unique<Ctx>(*this, x);
  }

 private:
  RecommenderAttackSpec spec_;
};

std::shared_ptr<Objective> build_recommender_attack(const RecommenderAttackSpec& spec) {
  if (spec.users <= 0 || spec.items <= 0) throw PreconditionError("matrix shape must be positive");
  if (spec.baseline.size() != static_cast<std::size_t>(spec.users) * spec.items)
    throw PreconditionError("baseline matrix has wrong shape");
  if (!(spec.epsilon > 0.0)) throw PreconditionError("budget epsilon must be positive");
  if (spec.rating_lower > spec.rating_upper) throw PreconditionError("rating bounds inverted");
  for (double v : spec.baseline)
    if (!(v >= spec.rating_lower && v <= spec.rating_upper))
      throw PreconditionError("baseline entries must lie in the rating bounds");
  return std::make_shared<RecommenderAttackObjective>(spec);
}

const RecommenderAttackSpec& attack_spec(const Objective& obj) {
  const auto* a = dynamic_cast<const RecommenderAttackObjective*>(&obj);
  if (!a) throw PreconditionError("not a recommender-attack objective");
  return a->spec();
}

// ---------------------------------------------------------------------------
// Modular-quadratic synthetic objective.

class ModularQuadraticObjective : public Objective {
 public:
  explicit ModularQuadraticObjective(ModularQuadraticSpec spec)
      : Objective("modular_quadratic", spec.dimension, static_cast<int>(spec.a.size())),
        spec_(std::move(spec)) {
    double sum_b = 0.0;
    for (double b : spec_.b) sum_b += b;
    smoothness_ = 2.0 * sum_b + 2.0 * spec_.q_coef;
    if (sum_b == 0.0 && spec_.q_coef == 0.0)
      gradient_bound_ = 0.0;
    else
      gradient_bound_ = std::nullopt;  // quadratic growth: unbounded on R^d
  }

  const ModularQuadraticSpec& spec() const { return spec_; }

  std::optional<double> marginal_magnitude_bound() const override {
    double mx = 0.0;
    for (std::size_t e = 0; e < spec_.a.size(); ++e) {
      if (spec_.b[e] > 0.0) return std::nullopt;  // grows with the region
      mx = std::max(mx, spec_.a[e]);
    }
    return mx;
  }

  class Ctx : public Context {
   public:
    Ctx(const ModularQuadraticObjective& obj, const Vector& x) : Context(obj), mobj_(obj), x_(x) {
      const auto& sp = mobj_.spec_;
      const int n = mobj_.ground_set_size();
      w_.resize(static_cast<std::size_t>(n));
      for (int e = 0; e < n; ++e) {
        double we = sp.a[static_cast<std::size_t>(e)];
        if (sp.b[static_cast<std::size_t>(e)] > 0.0) {
          double d2 = 0.0;
          for (int i = 0; i < sp.dimension; ++i) {
            const double d = x_[i] - sp.centers[static_cast<std::size_t>(e)][static_cast<std::size_t>(i)];
            d2 += d * d;
          }
          we += sp.b[static_cast<std::size_t>(e)] * d2;
        }
        w_[static_cast<std::size_t>(e)] = we;
      }
      q_value_ = sp.q_constant;
      if (sp.q_coef > 0.0) {
        double d2 = 0.0;
        for (int i = 0; i < sp.dimension; ++i) {
          const double d = x_[i] - (sp.q_center.empty() ? 0.0 : sp.q_center[static_cast<std::size_t>(i)]);
          d2 += d * d;
        }
        q_value_ += sp.q_coef * d2;
      }
      rebuild_base_cache();
    }

   protected:
    double value_impl(const SubsetSelection& s) const override {
      double acc = q_value_;
      for (ElementId e : s.elements()) acc += w_[static_cast<std::size_t>(e)];
      return acc;
    }

    Vector grad_impl(const SubsetSelection& s) const override {
      const auto& sp = mobj_.spec_;
      std::vector<double> g(static_cast<std::size_t>(sp.dimension), 0.0);
      for (ElementId e : s.elements()) {
        const double b = sp.b[static_cast<std::size_t>(e)];
        if (b == 0.0) continue;
        for (int i = 0; i < sp.dimension; ++i)
          g[static_cast<std::size_t>(i)] +=
              2.0 * b * (x_[i] - sp.centers[static_cast<std::size_t>(e)][static_cast<std::size_t>(i)]);
      }
      if (sp.q_coef > 0.0) {
        for (int i = 0; i < sp.dimension; ++i)
          g[static_cast<std::size_t>(i)] +=
              2.0 * sp.q_coef * (x_[i] - (sp.q_center.empty() ? 0.0 : sp.q_center[static_cast<std::size_t>(i)]));
      }
      return Vector(std::move(g));
    }

    void rebuild_base_cache() override { base_value_ = value_impl(base_); }

    // Modular: the gain of e never depends on the base set.
    double gain_impl(ElementId e) const override { return w_[static_cast<std::size_t>(e)]; }

    void advance_base_cache(ElementId e) override { base_value_ += w_[static_cast<std::size_t>(e)]; }

   private:
    const ModularQuadraticObjective& mobj_;
    Vector x_;
    std::vector<double> w_;
    double q_value_ = 0.0;
  };

 protected:
  std::unique_ptr<Context> make_context(const Vector& x) const override {
    return std::make_unique<Ctx>(*this, x);
  }

 private:
  ModularQuadraticSpec spec_;
};

std::shared_ptr<Objective> build_modular_quadratic(const ModularQuadraticSpec& spec) {
  const std::size_t n = spec.a.size();
  if (n == 0) throw PreconditionError("ground set must be nonempty");
  if (spec.b.size() != n) throw PreconditionError("need one b per element");
  if (spec.dimension <= 0) throw PreconditionError("dimension must be positive");
  for (std::size_t e = 0; e < n; ++e) {
    if (spec.a[e] < 0.0 || spec.b[e] < 0.0)
      throw PreconditionError("weights a, b must be nonnegative");
    if (spec.b[e] > 0.0 &&
        (spec.centers.size() <= e || spec.centers[e].size() != static_cast<std::size_t>(spec.dimension)))
      throw PreconditionError("element with b > 0 needs a center of full dimension");
  }
  if (spec.q_coef < 0.0 || spec.q_constant < 0.0)
    throw PreconditionError("baseline q must be nonnegative");
  if (!spec.q_center.empty() && spec.q_center.size() != static_cast<std::size_t>(spec.dimension))
    throw PreconditionError("q center has wrong dimension");
  return std::make_shared<ModularQuadraticObjective>(spec);
}

}  // namespace cvxsub
