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

#ifndef CVXSUB_CORE_HPP
#define CVXSUB_CORE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvxsub/errors.hpp"

namespace cvxsub {

// Ground-set elements are dense integers 0..n-1. External ids are mapped at
// the ingestion boundary, never inside the library.
using ElementId = int;

// An ordered, duplicate-free subset of a ground set of known size. Elements
// are kept sorted so iteration order (and greedy tie-breaking downstream) is
// deterministic; set operations are merge-based.
class SubsetSelection {
 public:
  SubsetSelection() : n_(0) {}  // empty subset of an empty ground set
  explicit SubsetSelection(int ground_set_size);
  SubsetSelection(int ground_set_size, std::vector<ElementId> elements);

  static SubsetSelection empty(int ground_set_size) { return SubsetSelection(ground_set_size); }
  // Builds a subset from a bitmask; requires n <= 32.
  static SubsetSelection from_mask(int ground_set_size, std::uint32_t mask);

  int ground_set_size() const { return n_; }
  int cardinality() const { return static_cast<int>(elements_.size()); }
  bool is_empty() const { return elements_.empty(); }
  bool contains(ElementId e) const;

  // Returns a copy with e inserted / removed. Inserting an existing element
  // or removing a missing one is a precondition error.
  SubsetSelection with(ElementId e) const;
  SubsetSelection without(ElementId e) const;
  SubsetSelection union_with(const SubsetSelection& other) const;
  bool is_subset_of(const SubsetSelection& other) const;

  const std::vector<ElementId>& elements() const { return elements_; }
  std::uint32_t mask() const;  // requires n <= 32

  bool operator==(const SubsetSelection& other) const = default;

  std::string to_string() const;

 private:
  int n_;
  std::vector<ElementId> elements_;  // strictly increasing
};

// Compares two element bitmasks by the lexicographic order of their ascending
// element sequences ({0,2} < {1}, {0} < {0,2}). Used for deterministic
// tie-breaking in exhaustive searches.
bool lex_mask_less(std::uint32_t a, std::uint32_t b);

// Uniform (|S| <= k) or partition matroid over a ground set of size n.
class MatroidConstraint {
 public:
  enum class Kind { kUniform, kPartition };

  static MatroidConstraint uniform(int ground_set_size, int k);
  // blocks must be disjoint and cover [0, n); one capacity per block with
  // capacities[b] <= |block b|.
  static MatroidConstraint partition(const std::vector<std::vector<ElementId>>& blocks,
                                     std::vector<int> capacities);

  Kind kind() const { return kind_; }
  bool is_uniform() const { return kind_ == Kind::kUniform; }
  int ground_set_size() const { return n_; }
  // Cardinality cap for uniform constraints.
  int uniform_k() const;
  int num_blocks() const { return static_cast<int>(capacities_.size()); }
  const std::vector<int>& capacities() const { return capacities_; }
  int block_of(ElementId e) const { return block_of_[static_cast<std::size_t>(e)]; }

  // Largest cardinality of an independent set (the matroid rank of V).
  int rank() const;

  bool is_independent(const SubsetSelection& s) const;
  // Elements e not in s with s + e independent; requires s independent.
  std::vector<ElementId> feasible_additions(const SubsetSelection& s) const;

 private:
  MatroidConstraint() = default;

  Kind kind_ = Kind::kUniform;
  int n_ = 0;
  int k_ = 0;                       // uniform only
  std::vector<int> block_of_;      // partition only, size n
  std::vector<int> capacities_;    // partition only
};

bool is_independent(const MatroidConstraint& c, const SubsetSelection& s);
std::vector<ElementId> feasible_additions(const MatroidConstraint& c, const SubsetSelection& s);

// Dense vector of 64-bit reals with optional block structure. Construction
// validates that every entry is finite.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::vector<double> entries);
  Vector(std::vector<double> entries, std::vector<int> block_sizes);

  static Vector zeros(int dim);
  static Vector constant(int dim, double value);

  int dimension() const { return static_cast<int>(entries_.size()); }
  double operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& entries() const { return entries_; }
  std::vector<double>& entries() { return entries_; }

  bool has_blocks() const { return !block_sizes_.empty(); }
  int num_blocks() const { return static_cast<int>(block_sizes_.size()); }
  const std::vector<int>& block_sizes() const { return block_sizes_; }
  std::span<const double> block(int b) const;

  bool all_finite() const;

 private:
  std::vector<double> entries_;
  std::vector<int> block_sizes_;  // empty when unstructured
};

double dot(const Vector& a, const Vector& b);
double squared_norm(const Vector& v);
double norm(const Vector& v);
// a + s * b
Vector axpy(const Vector& a, double s, const Vector& b);

// Convex feasible sets with exact Euclidean projections. See
// FeasibleRegion::project in continuous.cpp for the closed forms.
class FeasibleRegion {
 public:
  enum class Kind {
    kEuclideanBall,
    kBox,
    kProductOfBalls,
    kFrobeniusBallIntersectBox,
    kCappedSimplex,
  };

  static FeasibleRegion euclidean_ball(Vector center, double radius);
  static FeasibleRegion box(Vector lower, Vector upper);
  // Balls are centered at the origin, one per block. With nonnegative=true
  // the region is additionally intersected with the nonnegative orthant
  // (the natural domain of the bilinear facility-location objective).
  static FeasibleRegion product_of_balls(std::vector<int> block_sizes, std::vector<double> radii,
                                         bool nonnegative = false);
  static FeasibleRegion frobenius_ball_intersect_box(Vector center, double radius, double lower,
                                                     double upper);
  static FeasibleRegion capped_simplex(int k, int dimension);

  Kind kind() const { return kind_; }
  int dimension() const { return dim_; }
  double projection_tolerance() const { return projection_tol_; }
  void set_projection_tolerance(double tol) { projection_tol_ = tol; }

  // An upper bound on the Euclidean diameter of the region.
  double diameter() const;

  bool contains(const Vector& x, double tol = 1e-9) const;

  // Exact Euclidean projection onto the region. Throws NumericalError if the
  // Dykstra loop for the intersection region does not converge in budget.
  Vector project(const Vector& x) const;

  // Accessors used by tests and tools.
  double radius() const { return radius_; }
  const Vector& center() const { return center_; }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  const std::vector<int>& block_sizes() const { return block_sizes_; }
  const std::vector<double>& block_radii() const { return block_radii_; }
  bool nonnegative() const { return nonnegative_; }
  int simplex_cap() const { return simplex_k_; }
  double scalar_lower() const { return scalar_lower_; }
  double scalar_upper() const { return scalar_upper_; }

 private:
  FeasibleRegion() = default;

  Kind kind_ = Kind::kBox;
  int dim_ = 0;
  double projection_tol_ = 1e-10;

  Vector center_;
  double radius_ = 0.0;
  Vector lower_, upper_;
  std::vector<int> block_sizes_;
  std::vector<double> block_radii_;
  bool nonnegative_ = false;
  int simplex_k_ = 0;
  double scalar_lower_ = 0.0, scalar_upper_ = 0.0;
};

}  // namespace cvxsub

#endif  // CVXSUB_CORE_HPP
