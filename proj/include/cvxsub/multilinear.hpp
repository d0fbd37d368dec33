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

#ifndef CVXSUB_MULTILINEAR_HPP
#define CVXSUB_MULTILINEAR_HPP

#include <cstdint>
#include <vector>

#include "cvxsub/core.hpp"
#include "cvxsub/objectives.hpp"

namespace cvxsub {

// Inclusion probabilities y in [0,1]^n: F(x, y) = E[f(x, S)] where each
// element joins S independently with probability y_i.
class FractionalPoint {
 public:
  explicit FractionalPoint(std::vector<double> y);
  static FractionalPoint zeros(int n);
  static FractionalPoint corner(const SubsetSelection& s);

  int size() const { return static_cast<int>(y_.size()); }
  double operator[](int i) const { return y_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::vector<double> y_;
};

// Monte-Carlo settings. Sample j draws its own engine from
// derive_seed(seed, j), so concurrent sampling is order-independent; with
// antithetic on, odd samples reuse the previous sample's uniforms flipped.
struct EstimatorConfig {
  int samples = 200;
  std::uint64_t seed = 0;
  bool antithetic = false;
};

inline constexpr int kMaxExactExtensionGroundSet = 20;

// Exact F(x, y) by enumerating all 2^n subsets; terms with zero probability
// are skipped (so corners evaluate f exactly). Requires n <= 20.
double extension_value_exact(const Objective& obj, const Vector& x, const FractionalPoint& y);

struct SampledEstimate {
  double estimate = 0.0;
  double stderr_est = 0.0;  // sample standard deviation / sqrt(m)
  int samples = 0;
};

// Monte-Carlo estimate of F(x, y); deterministic given (seed, m). Requires
// m >= 2 for the standard error.
SampledEstimate extension_value_sampled(const Objective& obj, const Vector& x,
                                        const FractionalPoint& y, const EstimatorConfig& cfg);

struct ExtensionGradients {
  Vector grad_x;             // dimension d
  std::vector<double> grad_y;  // dimension n
};

// Estimators of grad_y F (per coordinate E[f(x, S+i) - f(x, S-i)]) and
// grad_x F (E[grad_x f(x, S)]) over common random subsets: one subset stream
// serves every coordinate and both gradients.
std::vector<double> grad_y_extension(const Objective& obj, const Vector& x,
                                     const FractionalPoint& y, const EstimatorConfig& cfg);
Vector grad_x_extension(const Objective& obj, const Vector& x, const FractionalPoint& y,
                        const EstimatorConfig& cfg);
ExtensionGradients extension_gradients_sampled(const Objective& obj, const Vector& x,
                                               const FractionalPoint& y,
                                               const EstimatorConfig& cfg);

// Exact counterparts by full enumeration (n <= 20); used by the solver's
// exact-extension mode and by the oracles.
std::vector<double> grad_y_extension_exact(const Objective& obj, const Vector& x,
                                           const FractionalPoint& y);
Vector grad_x_extension_exact(const Objective& obj, const Vector& x, const FractionalPoint& y);
ExtensionGradients extension_gradients_exact(const Objective& obj, const Vector& x,
                                             const FractionalPoint& y);

// Projection onto the polytope conv{1_S : S independent}: for Uniform(k) the
// downward-closed hull {y in [0,1]^n : sum y <= k}; for partition matroids
// independent per-block capped-simplex projections.
FractionalPoint project_polytope(const MatroidConstraint& c, const std::vector<double>& y);

// Reporting helper: the top-k (or per-block top-capacity) entries of y,
// smallest index on ties. Zero entries are never selected, so corners round
// back to their own set.
SubsetSelection round_fractional(const FractionalPoint& y, const MatroidConstraint& c);

}  // namespace cvxsub

#endif  // CVXSUB_MULTILINEAR_HPP
