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

#ifndef CVXSUB_OBJECTIVES_HPP
#define CVXSUB_OBJECTIVES_HPP

#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cvxsub/core.hpp"

namespace cvxsub {

// Evaluation contract for f(x, S): convex in the continuous argument for each
// fixed set, monotone submodular in the set for each fixed point of the
// intended domain. Handles are immutable after construction and safe to share
// across threads; evaluation contexts are created per call chain and hold the
// per-x caches (pair scores, row maxima) that make repeated set queries cheap.
//
// Every value/marginal computation bumps a shared atomic counter so solvers
// can account per-iteration function-evaluation costs.
class Objective {
 public:
  // Per-x evaluation context. value() and gain() each count as one function
  // evaluation; advancing the base set reuses the cached gain and is free.
  class Context {
   public:
    virtual ~Context() = default;

    double value(const SubsetSelection& s) const;
    Vector grad(const SubsetSelection& s) const;

    // Base-set protocol used by the greedy sweeps: set_base(s) evaluates
    // f(x, s) once; gain(e) evaluates f(x, s + e) - f(x, s) for e outside
    // the base; advance_base(e) folds a previously scored element into the
    // base without re-evaluating.
    void set_base(const SubsetSelection& s);
    double base_value() const { return base_value_; }
    const SubsetSelection& base_set() const { return base_; }
    double gain(ElementId e) const;
    void advance_base(ElementId e);

   protected:
    explicit Context(const Objective& obj);

    virtual double value_impl(const SubsetSelection& s) const = 0;
    virtual Vector grad_impl(const SubsetSelection& s) const = 0;
    virtual void rebuild_base_cache() = 0;
    virtual double gain_impl(ElementId e) const = 0;
    virtual void advance_base_cache(ElementId e) = 0;

    const Objective& obj_;
    SubsetSelection base_;
    double base_value_ = 0.0;

   private:
    void count_eval() const;
  };

  virtual ~Objective() = default;

  int dimension() const { return dim_; }
  int ground_set_size() const { return n_; }
  const std::string& name() const { return name_; }

  // Smoothness constant L (Assumption: gradients are L-Lipschitz in x).
  double smoothness() const { return smoothness_; }
  // Uniform gradient-norm bound M over all of R^d, or nullopt when the
  // gradient grows unboundedly (quadratic families).
  const std::optional<double>& gradient_bound() const { return gradient_bound_; }
  // Bound on |f(x, S+e) - f(x, S)| over the family's region, when one is
  // derivable; feeds the extension solver's step-size guard.
  virtual std::optional<double> marginal_magnitude_bound() const { return std::nullopt; }
  // Metadata overrides.
  void set_smoothness(double L) { smoothness_ = L; }
  void set_gradient_bound(std::optional<double> M) { gradient_bound_ = std::move(M); }

  // Solver starting point for this objective family (projected onto the
  // region by the solver before use).
  const Vector& initial_point() const { return initial_point_; }

  std::unique_ptr<Context> context(const Vector& x) const;

  // One-shot conveniences; hot paths should hold a context instead.
  double value(const Vector& x, const SubsetSelection& s) const;
  Vector grad_x(const Vector& x, const SubsetSelection& s) const;
  // Requires e outside s; equals value(x, s + e) - value(x, s).
  double marginal_gain(const Vector& x, const SubsetSelection& s, ElementId e) const;

  std::uint64_t evaluation_count() const { return counters_->evals.load(); }
  std::uint64_t gradient_count() const { return counters_->grads.load(); }
  void reset_counters() const {
    counters_->evals.store(0);
    counters_->grads.store(0);
  }

 protected:
  Objective(std::string name, int dim, int ground_set_size);

  virtual std::unique_ptr<Context> make_context(const Vector& x) const = 0;

  void check_inputs(const Vector& x, const SubsetSelection& s) const;

  struct Counters {
    std::atomic<std::uint64_t> evals{0};
    std::atomic<std::uint64_t> grads{0};
  };

  std::string name_;
  int dim_;
  int n_;
  double smoothness_ = 0.0;
  std::optional<double> gradient_bound_;
  Vector initial_point_;
  std::shared_ptr<Counters> counters_;
};

double value(const Objective& obj, const Vector& x, const SubsetSelection& s);
Vector grad_x(const Objective& obj, const Vector& x, const SubsetSelection& s);
double marginal_gain(const Objective& obj, const Vector& x, const SubsetSelection& s, ElementId e);

// f(x, S) = sum_i max_{j in S} x_i^T Q_ij x_j + lambda / max(sum_i ||x_i||^2, floor),
// with x the concatenation of n blocks of size m. The max over an empty S
// contributes 0, so f(x, {}) is the regularizer alone. Intended domain is the
// nonnegative orthant, where all pair scores are nonnegative and f is
// monotone submodular in S.
struct ConvexFacilityLocationSpec {
  int block_size = 0;  // m
  int num_blocks = 0;  // n (= ground set size)
  // q[i * n + j] is the m x m matrix Q_ij, row-major. Each must be symmetric
  // PSD within 1e-8 with strictly positive entries.
  std::vector<std::vector<double>> q;
  double lambda = 1.0;
  double denominator_floor = 1e-6;
};

// h(X', S) = (1/|U|) sum_u max_{j in S} X'_{u,j} over a users x items matrix
// flattened row-major into x. The baseline matrix only seeds the attack
// region and the initial point; h itself depends on X' alone.
struct RecommenderAttackSpec {
  int users = 0;
  int items = 0;
  std::vector<double> baseline;  // users x items, row-major, entries in [0,5]
  double epsilon = 0.0;          // Frobenius budget, > 0
  double rating_lower = 0.0;
  double rating_upper = 5.0;
};

// f(x, S) = sum_{e in S} (a_e + b_e ||x - c_e||^2) + q(x) with
// q(x) = q_coef ||x - q_center||^2 + q_constant. Modular in S, so the inner
// maximization is exactly top-k by weight; the test oracles lean on this.
struct ModularQuadraticSpec {
  std::vector<double> a;               // per element, >= 0
  std::vector<double> b;               // per element, >= 0
  std::vector<std::vector<double>> centers;  // per element, dimension d (may be empty when b = 0)
  int dimension = 0;
  double q_coef = 0.0;
  std::vector<double> q_center;
  double q_constant = 0.0;
};

std::shared_ptr<Objective> build_convex_facility_location(const ConvexFacilityLocationSpec& spec);
std::shared_ptr<Objective> build_recommender_attack(const RecommenderAttackSpec& spec);
std::shared_ptr<Objective> build_modular_quadratic(const ModularQuadraticSpec& spec);

// Spectral norm of a symmetric m x m matrix by power iteration (50 rounds,
// relative tolerance 1e-8, fixed start).
double symmetric_spectral_norm(const std::vector<double>& a, int m);

// Exposed for tests and the experiment runners.
class FacilityLocationObjective;
class RecommenderAttackObjective;
const ConvexFacilityLocationSpec& facility_spec(const Objective& obj);
const RecommenderAttackSpec& attack_spec(const Objective& obj);

}  // namespace cvxsub

#endif  // CVXSUB_OBJECTIVES_HPP
