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

#include <cmath>
#include <memory>
#include <vector>

#include "cvxsub/experiments.hpp"
#include "cvxsub/objectives.hpp"
#include "cvxsub/reference.hpp"
#include "cvxsub/rng.hpp"
#include "doctest.h"

using namespace cvxsub;

namespace {

// Central finite differences with the step tied to the point scale.
std::vector<double> fd_gradient(const Objective& obj, const Vector& x, const SubsetSelection& s) {
  const double h = 1e-6 * (1.0 + norm(x));
  std::vector<double> g(static_cast<std::size_t>(x.dimension()));
  for (int i = 0; i < x.dimension(); ++i) {
    Vector hi = x, lo = x;
    hi[i] += h;
    lo[i] -= h;
    g[static_cast<std::size_t>(i)] = (obj.value(hi, s) - obj.value(lo, s)) / (2.0 * h);
  }
  return g;
}

Vector random_region_point(rng::Engine& eng, const FeasibleRegion& region) {
  std::vector<double> v(static_cast<std::size_t>(region.dimension()));
  for (double& e : v) e = rng::uniform(eng, -1.0, 1.5);
  return region.project(Vector(std::move(v)));
}

SubsetSelection random_subset_of_size(rng::Engine& eng, int n, int size) {
  std::vector<ElementId> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  std::vector<ElementId> chosen;
  for (int i = 0; i < size; ++i) {
    const auto at = rng::uniform_int(eng, static_cast<std::int64_t>(pool.size()));
    chosen.push_back(pool[static_cast<std::size_t>(at)]);
    pool.erase(pool.begin() + at);
  }
  return SubsetSelection(n, std::move(chosen));
}

struct BuiltInstance {
  std::shared_ptr<Objective> obj;
  FeasibleRegion region = FeasibleRegion::capped_simplex(0, 1);
};

BuiltInstance make_facility(rng::Engine& eng, int m = 3, int n = 6) {
  const ProblemInstance inst = generate_synthetic_case(m, n, 2, 1.0, eng());
  return {inst.objective, inst.region};
}

BuiltInstance make_attack(rng::Engine& eng, int users = 5, int items = 7) {
  RecommenderAttackSpec spec;
  spec.users = users;
  spec.items = items;
  spec.baseline.resize(static_cast<std::size_t>(users) * items);
  for (double& v : spec.baseline) v = rng::uniform(eng, 0.0, 5.0);
  spec.epsilon = 2.0;
  return {build_recommender_attack(spec),
          FeasibleRegion::frobenius_ball_intersect_box(Vector(spec.baseline), 2.0, 0, 5)};
}

BuiltInstance make_modular(rng::Engine& eng, int n = 6, int d = 4) {
  ModularQuadraticSpec spec;
  spec.dimension = d;
  for (int e = 0; e < n; ++e) {
    spec.a.push_back(rng::uniform(eng, 0.0, 3.0));
    spec.b.push_back(rng::uniform(eng, 0.0, 1.0));
    std::vector<double> c(static_cast<std::size_t>(d));
    for (double& v : c) v = rng::uniform(eng, -1.0, 1.0);
    spec.centers.push_back(std::move(c));
  }
  spec.q_coef = 0.5;
  spec.q_constant = 0.25;
  return {build_modular_quadratic(spec), FeasibleRegion::euclidean_ball(Vector::zeros(d), 2.0)};
}

}  // namespace

TEST_CASE("facility location value conventions") {
  rng::Engine eng = rng::make_engine(11);
  const auto built = make_facility(eng);
  const auto& spec = facility_spec(*built.obj);
  const Vector x = built.obj->initial_point();
  // Empty set: the regularizer alone.
  double ssum = 0.0;
  for (int i = 0; i < x.dimension(); ++i) ssum += x[i] * x[i];
  const double expect = spec.lambda / std::max(ssum, spec.denominator_floor);
  CHECK(built.obj->value(x, SubsetSelection::empty(spec.num_blocks)) ==
        doctest::Approx(expect).epsilon(1e-12));

  // Against the from-scratch reference on random inputs.
  for (int rep = 0; rep < 30; ++rep) {
    const Vector xr = random_region_point(eng, built.region);
    const auto s = random_subset_of_size(eng, spec.num_blocks,
                                         1 + static_cast<int>(rng::uniform_int(eng, spec.num_blocks)));
    CHECK(built.obj->value(xr, s) ==
          doctest::Approx(serial_ref::facility_value(spec, xr.entries(), s)).epsilon(1e-12));
  }
}

TEST_CASE("modular quadratic value is the weight sum") {
  ModularQuadraticSpec spec;
  spec.a = {3.0, 1.0, 2.0};
  spec.b = {0.0, 0.0, 0.0};
  spec.dimension = 2;
  const auto obj = build_modular_quadratic(spec);
  CHECK(obj->value(Vector::zeros(2), SubsetSelection(3, {0, 2})) == 5.0);
  CHECK(obj->marginal_gain(Vector::zeros(2), SubsetSelection(3, {1}), 0) == 3.0);
  CHECK(obj->gradient_bound().has_value());
  CHECK(*obj->gradient_bound() == 0.0);
}

TEST_CASE("attack utility is the mean row maximum") {
  RecommenderAttackSpec spec;
  spec.users = 2;
  spec.items = 2;
  spec.baseline = {5.0, 0.0, 0.0, 5.0};
  spec.epsilon = 1.0;
  const auto obj = build_recommender_attack(spec);
  const Vector x(spec.baseline);
  CHECK(obj->value(x, SubsetSelection(2, {0})) == doctest::Approx(2.5));
  CHECK(obj->value(x, SubsetSelection::empty(2)) == 0.0);
  CHECK(obj->value(x, SubsetSelection(2, {0, 1})) == doctest::Approx(5.0));
  // Gradient puts 1/|U| on each row's argmax within S (smallest column wins ties).
  const Vector g = obj->grad_x(x, SubsetSelection(2, {0, 1}));
  CHECK(g[0] == doctest::Approx(0.5));
  CHECK(g[1] == 0.0);
  CHECK(g[2] == 0.0);
  CHECK(g[3] == doctest::Approx(0.5));
}

TEST_CASE("bilinear gradient blocks") {
  // Single pair f = x_1^T Q x_2: block-1 gradient Q x_2, block-2 Q^T x_1.
  ConvexFacilityLocationSpec spec;
  spec.block_size = 2;
  spec.num_blocks = 2;
  spec.lambda = 1.0;
  const std::vector<double> q = {1.0, 2.0, 2.0, 5.0};
  spec.q = {q, q, q, q};
  const auto obj = build_convex_facility_location(spec);
  const Vector x({0.3, 0.4, 0.1, 0.2}, {2, 2});
  // S = {1}: row 0 takes Q_{0,1} x_1, row 1 takes Q_{1,1} x_1.
  const Vector g = obj->grad_x(x, SubsetSelection(2, {1}));
  // Block contributions: row 0 adds Q x_1 to block 0 and Q^T x_0 to block 1;
  // row 1 adds Q x_1 + Q^T x_1 to block 1.
  const double qx1_0 = 1.0 * 0.1 + 2.0 * 0.2;
  const double qx1_1 = 2.0 * 0.1 + 5.0 * 0.2;
  CHECK(g[0] == doctest::Approx(qx1_0).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(qx1_1).epsilon(1e-12));
  const std::vector<double> fd = fd_gradient(*obj, x, SubsetSelection(2, {1}));
  for (int i = 0; i < 4; ++i)
    CHECK(g[i] == doctest::Approx(fd[static_cast<std::size_t>(i)]).epsilon(1e-5));
}

TEST_CASE("gradients match central finite differences at tie-free points") {
  rng::Engine eng = rng::make_engine(321);
  std::vector<BuiltInstance> built;
  built.push_back(make_facility(eng));
  built.push_back(make_attack(eng));
  built.push_back(make_modular(eng));
  for (const auto& bi : built) {
    const int n = bi.obj->ground_set_size();
    int done = 0;
    while (done < 20) {
      Vector x = random_region_point(eng, bi.region);
      // Nudge entries to break per-row argmax ties before differencing.
      for (int i = 0; i < x.dimension(); ++i) x[i] += 1e-7 * rng::uniform(eng, -1.0, 1.0);
      x = bi.region.project(x);
      const auto s =
          random_subset_of_size(eng, n, 1 + static_cast<int>(rng::uniform_int(eng, n)));
      const Vector g = bi.obj->grad_x(x, s);
      const std::vector<double> fd = fd_gradient(*bi.obj, x, s);
      double gn = 1.0;
      for (int i = 0; i < x.dimension(); ++i) gn = std::max(gn, std::abs(g[i]));
      for (int i = 0; i < x.dimension(); ++i)
        CHECK(std::abs(g[i] - fd[static_cast<std::size_t>(i)]) <= 1e-5 * gn);
      ++done;
    }
  }
}

TEST_CASE("marginal gains equal the definitional difference") {
  rng::Engine eng = rng::make_engine(654);
  std::vector<BuiltInstance> built;
  built.push_back(make_facility(eng));
  built.push_back(make_attack(eng));
  built.push_back(make_modular(eng));
  for (const auto& bi : built) {
    const int n = bi.obj->ground_set_size();
    for (int rep = 0; rep < 100; ++rep) {
      const Vector x = random_region_point(eng, bi.region);
      const auto s = random_subset_of_size(eng, n, static_cast<int>(rng::uniform_int(eng, n)));
      ElementId e = static_cast<ElementId>(rng::uniform_int(eng, n));
      if (s.contains(e)) {
        CHECK_THROWS_AS(bi.obj->marginal_gain(x, s, e), PreconditionError);
        continue;
      }
      const double inc = bi.obj->marginal_gain(x, s, e);
      const double def = bi.obj->value(x, s.with(e)) - bi.obj->value(x, s);
      CHECK(std::abs(inc - def) <= 1e-9);
      CHECK(inc >= -1e-9);  // monotone on the region
    }
  }
}

TEST_CASE("dominated elements add nothing to the facility part") {
  rng::Engine eng = rng::make_engine(888);
  const auto built = make_facility(eng, 3, 5);
  const Vector x = random_region_point(eng, built.region);
  auto ctx = built.obj->context(x);
  // Find an element whose pair scores are dominated by the current set.
  const SubsetSelection full(5, {0, 1, 2, 3});
  ctx->set_base(full);
  const double gain = ctx->gain(4);
  const double recompute = built.obj->value(x, full.with(4)) - built.obj->value(x, full);
  CHECK(gain == doctest::Approx(recompute).epsilon(1e-10));
  CHECK(gain >= 0.0);
}

TEST_CASE("submodularity and monotonicity on random triples") {
  rng::Engine eng = rng::make_engine(1234);
  std::vector<BuiltInstance> built;
  built.push_back(make_facility(eng));
  built.push_back(make_attack(eng));
  built.push_back(make_modular(eng));
  for (const auto& bi : built) {
    const int n = bi.obj->ground_set_size();
    int done = 0;
    while (done < 500) {
      const Vector x = random_region_point(eng, bi.region);
      const auto small = random_subset_of_size(eng, n, static_cast<int>(rng::uniform_int(eng, n - 1)));
      // Grow small into a strict superset.
      SubsetSelection big = small;
      for (ElementId e = 0; e < n; ++e)
        if (!big.contains(e) && rng::uniform_unit(eng) < 0.4) big = big.with(e);
      ElementId probe = -1;
      for (ElementId e = 0; e < n; ++e)
        if (!big.contains(e)) probe = e;
      if (probe < 0) continue;
      const double gain_small = bi.obj->marginal_gain(x, small, probe);
      const double gain_big = bi.obj->marginal_gain(x, big, probe);
      CHECK(gain_small >= gain_big - 1e-9);  // diminishing returns
      CHECK(gain_small >= -1e-9);
      CHECK(gain_big >= -1e-9);
      ++done;
    }
  }
}

TEST_CASE("convexity along segments for fixed sets") {
  rng::Engine eng = rng::make_engine(4321);
  // The attack utility and the modular quadratic are convex everywhere.
  std::vector<BuiltInstance> built;
  built.push_back(make_attack(eng));
  built.push_back(make_modular(eng));
  for (const auto& bi : built) {
    const int n = bi.obj->ground_set_size();
    for (int rep = 0; rep < 200; ++rep) {
      const Vector a = random_region_point(eng, bi.region);
      const Vector b = random_region_point(eng, bi.region);
      const auto s = random_subset_of_size(eng, n, 1 + static_cast<int>(rng::uniform_int(eng, n)));
      Vector mid = a;
      for (int i = 0; i < a.dimension(); ++i) mid[i] = 0.5 * (a[i] + b[i]);
      CHECK(bi.obj->value(mid, s) <=
            0.5 * bi.obj->value(a, s) + 0.5 * bi.obj->value(b, s) + 1e-9);
    }
  }

  // The facility objective is checked away from the regularizer floor; the
  // bilinear scores make midpoint convexity an empirical property here, so
  // violations are counted rather than asserted one by one.
  const auto fac = make_facility(eng);
  const auto& spec = facility_spec(*fac.obj);
  int tested = 0, held = 0;
  while (tested < 200) {
    const Vector a = random_region_point(eng, fac.region);
    const Vector b = random_region_point(eng, fac.region);
    if (squared_norm(a) <= 10 * spec.denominator_floor ||
        squared_norm(b) <= 10 * spec.denominator_floor)
      continue;
    const auto s = random_subset_of_size(eng, spec.num_blocks, 2);
    Vector mid = a;
    for (int i = 0; i < a.dimension(); ++i) mid[i] = 0.5 * (a[i] + b[i]);
    if (squared_norm(mid) <= 10 * spec.denominator_floor) continue;
    ++tested;
    if (fac.obj->value(mid, s) <= 0.5 * fac.obj->value(a, s) + 0.5 * fac.obj->value(b, s) + 1e-9)
      ++held;
  }
  CHECK(held >= 190);  // holds empirically away from the floor
}

TEST_CASE("builder metadata and validation") {
  // Case I dimensions: m=10, n=30 -> d=300.
  const ProblemInstance case1 = generate_synthetic_case(10, 30, 5, 1.0, 3);
  CHECK(case1.objective->dimension() == 300);
  CHECK(case1.objective->ground_set_size() == 30);
  CHECK(case1.objective->smoothness() > 0.0);
  CHECK(case1.objective->gradient_bound().has_value());

  // Case II dimensions: m=10, n=50 -> d=500.
  const ProblemInstance case2 = generate_synthetic_case(10, 50, 10, 1.0, 4);
  CHECK(case2.objective->dimension() == 500);
  CHECK(case2.objective->ground_set_size() == 50);

  // Attack dims: epsilon = 0.5% of users x movies.
  RecommenderAttackSpec aspec;
  aspec.users = 4;
  aspec.items = 6;
  aspec.baseline.assign(24, 1.0);
  aspec.epsilon = 0.005 * 4 * 6;
  const auto attack = build_recommender_attack(aspec);
  CHECK(attack->dimension() == 24);
  CHECK(attack->ground_set_size() == 6);
  CHECK(attack->smoothness() == 0.0);
  CHECK(*attack->gradient_bound() == doctest::Approx(0.5));

  // Invalid specs are rejected.
  ConvexFacilityLocationSpec bad;
  bad.block_size = 2;
  bad.num_blocks = 1;
  bad.q = {{1.0, 0.5, 0.4, 1.0}};  // asymmetric
  CHECK_THROWS_AS(build_convex_facility_location(bad), PreconditionError);
  bad.q = {{1.0, -0.1, -0.1, 1.0}};  // nonpositive entries
  CHECK_THROWS_AS(build_convex_facility_location(bad), PreconditionError);
  aspec.baseline[0] = 7.0;
  CHECK_THROWS_AS(build_recommender_attack(aspec), PreconditionError);
}

TEST_CASE("power iteration matches a hand-checked spectral norm") {
  // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
  CHECK(symmetric_spectral_norm({2, 1, 1, 2}, 2) == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("synthetic case determinism and positivity") {
  const ProblemInstance a = generate_synthetic_case(3, 4, 2, 1.0, 42);
  const ProblemInstance b = generate_synthetic_case(3, 4, 2, 1.0, 42);
  const auto& qa = facility_spec(*a.objective).q;
  const auto& qb = facility_spec(*b.objective).q;
  CHECK(qa == qb);
  for (const auto& q : qa)
    for (double v : q) CHECK(v > 0.0);
}

TEST_CASE("evaluation counters") {
  rng::Engine eng = rng::make_engine(31);
  const auto built = make_modular(eng);
  built.obj->reset_counters();
  const Vector x = Vector::zeros(4);
  (void)built.obj->value(x, SubsetSelection(6, {1}));
  CHECK(built.obj->evaluation_count() == 1);
  (void)built.obj->marginal_gain(x, SubsetSelection(6, {1}), 2);
  CHECK(built.obj->evaluation_count() == 3);  // base + gain
  built.obj->reset_counters();
  CHECK(built.obj->evaluation_count() == 0);
}
