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

#include "cvxsub/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace cvxsub {

SubsetSelection::SubsetSelection(int ground_set_size) : n_(ground_set_size) {
  if (n_ < 0) throw PreconditionError("ground set size must be nonnegative");
}

SubsetSelection::SubsetSelection(int ground_set_size, std::vector<ElementId> elements)
    : n_(ground_set_size), elements_(std::move(elements)) {
  if (n_ < 0) throw PreconditionError("ground set size must be nonnegative");
  std::sort(elements_.begin(), elements_.end());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i] < 0 || elements_[i] >= n_)
      throw PreconditionError("element id out of range");
    if (i > 0 && elements_[i] == elements_[i - 1])
      throw PreconditionError("duplicate element id");
  }
}

SubsetSelection SubsetSelection::from_mask(int ground_set_size, std::uint32_t mask) {
  if (ground_set_size > 32) throw PreconditionError("mask construction requires n <= 32");
  std::vector<ElementId> elems;
  for (int i = 0; i < ground_set_size; ++i)
    if (mask & (1u << i)) elems.push_back(i);
  if (mask >> ground_set_size) throw PreconditionError("mask has bits beyond ground set");
  return SubsetSelection(ground_set_size, std::move(elems));
}

bool SubsetSelection::contains(ElementId e) const {
  return std::binary_search(elements_.begin(), elements_.end(), e);
}

SubsetSelection SubsetSelection::with(ElementId e) const {
  if (e < 0 || e >= n_) throw PreconditionError("element id out of range");
  if (contains(e)) throw PreconditionError("element already in subset");
  SubsetSelection out(*this);
  out.elements_.insert(std::lower_bound(out.elements_.begin(), out.elements_.end(), e), e);
  return out;
}

SubsetSelection SubsetSelection::without(ElementId e) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), e);
  if (it == elements_.end() || *it != e) throw PreconditionError("element not in subset");
  SubsetSelection out(*this);
  out.elements_.erase(out.elements_.begin() + (it - elements_.begin()));
  return out;
}

SubsetSelection SubsetSelection::union_with(const SubsetSelection& other) const {
  if (other.n_ != n_) throw PreconditionError("ground set size mismatch");
  std::vector<ElementId> merged;
  merged.reserve(elements_.size() + other.elements_.size());
  std::set_union(elements_.begin(), elements_.end(), other.elements_.begin(),
                 other.elements_.end(), std::back_inserter(merged));
  SubsetSelection out(n_);
  out.elements_ = std::move(merged);
  return out;
}

bool SubsetSelection::is_subset_of(const SubsetSelection& other) const {
  return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(),
                       elements_.end());
}

std::uint32_t SubsetSelection::mask() const {
  if (n_ > 32) throw PreconditionError("mask conversion requires n <= 32");
  std::uint32_t m = 0;
  for (ElementId e : elements_) m |= (1u << e);
  return m;
}

std::string SubsetSelection::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (i) os << ',';
    os << elements_[i];
  }
  os << '}';
  return os.str();
}

bool lex_mask_less(std::uint32_t a, std::uint32_t b) {
  if (a == b) return false;
  // Sequences agree on all elements below the lowest differing bit i. The
  // mask holding i contributes element i at that position; the other mask
  // either has nothing left (it is a strict prefix, hence smaller) or its
  // next element is larger than i.
  const std::uint32_t diff = a ^ b;
  const int i = std::countr_zero(diff);
  const bool a_has = (a >> i) & 1u;
  const std::uint32_t rest_other = (a_has ? b : a) >> i;
  if (rest_other == 0) return !a_has;  // the other mask is a strict prefix
  return a_has;
}

MatroidConstraint MatroidConstraint::uniform(int ground_set_size, int k) {
  if (ground_set_size < 0) throw PreconditionError("ground set size must be nonnegative");
  if (k < 0 || k > ground_set_size)
    throw PreconditionError("uniform cap k must satisfy 0 <= k <= n");
  MatroidConstraint c;
  c.kind_ = Kind::kUniform;
  c.n_ = ground_set_size;
  c.k_ = k;
  return c;
}

MatroidConstraint MatroidConstraint::partition(const std::vector<std::vector<ElementId>>& blocks,
                                               std::vector<int> capacities) {
  if (blocks.size() != capacities.size())
    throw PreconditionError("one capacity per block required");
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.size());
  MatroidConstraint c;
  c.kind_ = Kind::kPartition;
  c.n_ = n;
  c.block_of_.assign(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (capacities[b] < 0 || capacities[b] > static_cast<int>(blocks[b].size()))
      throw PreconditionError("capacity must satisfy 0 <= cap <= |block|");
    for (ElementId e : blocks[b]) {
      if (e < 0 || e >= n) throw PreconditionError("block element out of range");
      if (c.block_of_[static_cast<std::size_t>(e)] != -1)
        throw PreconditionError("blocks must be disjoint");
      c.block_of_[static_cast<std::size_t>(e)] = static_cast<int>(b);
    }
  }
  for (int v : c.block_of_)
    if (v == -1) throw PreconditionError("blocks must cover the ground set");
  c.capacities_ = std::move(capacities);
  return c;
}

int MatroidConstraint::uniform_k() const {
  if (kind_ != Kind::kUniform) throw PreconditionError("not a uniform constraint");
  return k_;
}

int MatroidConstraint::rank() const {
  if (kind_ == Kind::kUniform) return k_;
  int r = 0;
  for (int cap : capacities_) r += cap;
  return r;
}

bool MatroidConstraint::is_independent(const SubsetSelection& s) const {
  if (s.ground_set_size() != n_)
    throw PreconditionError("ground-set size mismatch between constraint and subset");
  if (kind_ == Kind::kUniform) return s.cardinality() <= k_;
  std::vector<int> counts(capacities_.size(), 0);
  for (ElementId e : s.elements()) ++counts[static_cast<std::size_t>(block_of_[static_cast<std::size_t>(e)])];
  for (std::size_t b = 0; b < counts.size(); ++b)
    if (counts[b] > capacities_[b]) return false;
  return true;
}

std::vector<ElementId> MatroidConstraint::feasible_additions(const SubsetSelection& s) const {
  if (!is_independent(s)) throw PreconditionError("subset is not independent");
  std::vector<ElementId> out;
  if (kind_ == Kind::kUniform) {
    if (s.cardinality() >= k_) return out;
    for (ElementId e = 0; e < n_; ++e)
      if (!s.contains(e)) out.push_back(e);
    return out;
  }
  std::vector<int> counts(capacities_.size(), 0);
  for (ElementId e : s.elements()) ++counts[static_cast<std::size_t>(block_of_[static_cast<std::size_t>(e)])];
  for (ElementId e = 0; e < n_; ++e) {
    if (s.contains(e)) continue;
    const int b = block_of_[static_cast<std::size_t>(e)];
    if (counts[static_cast<std::size_t>(b)] < capacities_[static_cast<std::size_t>(b)]) out.push_back(e);
  }
  return out;
}

bool is_independent(const MatroidConstraint& c, const SubsetSelection& s) {
  return c.is_independent(s);
}

std::vector<ElementId> feasible_additions(const MatroidConstraint& c, const SubsetSelection& s) {
  return c.feasible_additions(s);
}

Vector::Vector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (!all_finite()) throw NumericalError("vector entries must be finite");
}

Vector::Vector(std::vector<double> entries, std::vector<int> block_sizes)
    : entries_(std::move(entries)), block_sizes_(std::move(block_sizes)) {
  if (!all_finite()) throw NumericalError("vector entries must be finite");
  int total = 0;
  for (int b : block_sizes_) {
    if (b <= 0) throw PreconditionError("block sizes must be positive");
    total += b;
  }
  if (total != dimension()) throw PreconditionError("block sizes must sum to dimension");
}

Vector Vector::zeros(int dim) { return Vector(std::vector<double>(static_cast<std::size_t>(dim), 0.0)); }

Vector Vector::constant(int dim, double value) {
  return Vector(std::vector<double>(static_cast<std::size_t>(dim), value));
}

std::span<const double> Vector::block(int b) const {
  int offset = 0;
  for (int i = 0; i < b; ++i) offset += block_sizes_[static_cast<std::size_t>(i)];
  return {entries_.data() + offset, static_cast<std::size_t>(block_sizes_[static_cast<std::size_t>(b)])};
}

bool Vector::all_finite() const {
  for (double v : entries_)
    if (!std::isfinite(v)) return false;
  return true;
}

double dot(const Vector& a, const Vector& b) {
  if (a.dimension() != b.dimension()) throw PreconditionError("dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < a.dimension(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(const Vector& v) {
  double s = 0.0;
  for (int i = 0; i < v.dimension(); ++i) s += v[i] * v[i];
  return s;
}

double norm(const Vector& v) { return std::sqrt(squared_norm(v)); }

Vector axpy(const Vector& a, double s, const Vector& b) {
  if (a.dimension() != b.dimension()) throw PreconditionError("dimension mismatch");
  std::vector<double> out(a.entries());
  for (int i = 0; i < a.dimension(); ++i) out[static_cast<std::size_t>(i)] += s * b[i];
  return Vector(std::move(out), a.block_sizes());
}

FeasibleRegion FeasibleRegion::euclidean_ball(Vector center, double radius) {
  if (radius <= 0.0) throw PreconditionError("radius must be positive");
  FeasibleRegion r;
  r.kind_ = Kind::kEuclideanBall;
  r.dim_ = center.dimension();
  r.center_ = std::move(center);
  r.radius_ = radius;
  return r;
}

FeasibleRegion FeasibleRegion::box(Vector lower, Vector upper) {
  if (lower.dimension() != upper.dimension()) throw PreconditionError("dimension mismatch");
  for (int i = 0; i < lower.dimension(); ++i)
    if (lower[i] > upper[i]) throw PreconditionError("box requires lower <= upper entrywise");
  FeasibleRegion r;
  r.kind_ = Kind::kBox;
  r.dim_ = lower.dimension();
  r.lower_ = std::move(lower);
  r.upper_ = std::move(upper);
  return r;
}

FeasibleRegion FeasibleRegion::product_of_balls(std::vector<int> block_sizes,
                                                std::vector<double> radii, bool nonnegative) {
  if (block_sizes.size() != radii.size()) throw PreconditionError("one radius per block required");
  int dim = 0;
  for (int b : block_sizes) {
    if (b <= 0) throw PreconditionError("block sizes must be positive");
    dim += b;
  }
  for (double rad : radii)
    if (rad <= 0.0) throw PreconditionError("radius must be positive");
  FeasibleRegion r;
  r.kind_ = Kind::kProductOfBalls;
  r.dim_ = dim;
  r.block_sizes_ = std::move(block_sizes);
  r.block_radii_ = std::move(radii);
  r.nonnegative_ = nonnegative;
  return r;
}

FeasibleRegion FeasibleRegion::frobenius_ball_intersect_box(Vector center, double radius,
                                                            double lower, double upper) {
  if (radius <= 0.0) throw PreconditionError("radius must be positive");
  if (lower > upper) throw PreconditionError("box requires lower <= upper");
  for (int i = 0; i < center.dimension(); ++i)
    if (center[i] < lower || center[i] > upper)
      throw PreconditionError("ball center must lie in the box (region must be nonempty)");
  FeasibleRegion r;
  r.kind_ = Kind::kFrobeniusBallIntersectBox;
  r.dim_ = center.dimension();
  r.center_ = std::move(center);
  r.radius_ = radius;
  r.scalar_lower_ = lower;
  r.scalar_upper_ = upper;
  return r;
}

FeasibleRegion FeasibleRegion::capped_simplex(int k, int dimension) {
  if (dimension <= 0) throw PreconditionError("dimension must be positive");
  if (k < 0 || k > dimension) throw PreconditionError("cap must satisfy 0 <= k <= dimension");
  FeasibleRegion r;
  r.kind_ = Kind::kCappedSimplex;
  r.dim_ = dimension;
  r.simplex_k_ = k;
  return r;
}

double FeasibleRegion::diameter() const {
  switch (kind_) {
    case Kind::kEuclideanBall:
      return 2.0 * radius_;
    case Kind::kBox: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double d = upper_[i] - lower_[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case Kind::kProductOfBalls: {
      double s = 0.0;
      for (double r : block_radii_) s += 4.0 * r * r;
      return std::sqrt(s);
    }
    case Kind::kFrobeniusBallIntersectBox:
      return 2.0 * radius_;
    case Kind::kCappedSimplex:
      return std::sqrt(static_cast<double>(std::min(2 * simplex_k_, dim_)));
  }
  return 0.0;
}

}  // namespace cvxsub
