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
#include <vector>

#include "cvxsub/continuous.hpp"
#include "cvxsub/objectives.hpp"
#include "cvxsub/reference.hpp"
#include "cvxsub/rng.hpp"
#include "doctest.h"

using namespace cvxsub;

namespace {

// Independent oracle for the capped-simplex projection: Dykstra between the
// unit box and the halfspace {sum y <= k}, both with closed-form projections.
// Written test-locally so it shares nothing with the production bisection.
std::vector<double> dykstra_simplex_oracle(const std::vector<double>& x, int k) {
  const std::size_t n = x.size();
  std::vector<double> z(x), p(n, 0.0), q(n, 0.0), y(n);
  for (int sweep = 0; sweep < 20000; ++sweep) {
    double move = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = z[i] + p[i];
      y[i] = std::min(1.0, std::max(0.0, t));
      p[i] = t - y[i];
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += y[i] + q[i];
    const double shift = (total > k) ? (total - k) / static_cast<double>(n) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double nz = y[i] + q[i] - shift;
      move += std::abs(nz - z[i]);
      q[i] = y[i] + q[i] - nz;
      z[i] = nz;
    }
    if (move < 1e-12) break;
  }
  return z;
}

std::vector<double> random_point(rng::Engine& eng, int d, double lo, double hi) {
  std::vector<double> v(static_cast<std::size_t>(d));
  for (double& e : v) e = rng::uniform(eng, lo, hi);
  return v;
}

std::vector<FeasibleRegion> sample_regions() {
  std::vector<FeasibleRegion> out;
  out.push_back(FeasibleRegion::euclidean_ball(Vector({0.5, -0.5, 0.0}), 1.5));
  out.push_back(FeasibleRegion::box(Vector({-1, 0, -2}), Vector({1, 2, 0})));
  out.push_back(FeasibleRegion::product_of_balls({2, 2}, {1.0, 0.5}));
  out.push_back(FeasibleRegion::product_of_balls({2, 2}, {1.0, 1.0}, /*nonnegative=*/true));
  out.push_back(FeasibleRegion::frobenius_ball_intersect_box(Vector({2, 3, 2, 1}), 1.2, 0, 5));
  out.push_back(FeasibleRegion::capped_simplex(2, 4));
  return out;
}

}  // namespace

TEST_CASE("projection closed forms") {
  // Radial scaling.
  const auto ball = FeasibleRegion::euclidean_ball(Vector::zeros(2), 1.0);
  const Vector p = ball.project(Vector({3.0, 4.0}));
  CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.8).epsilon(1e-12));

  // Entrywise clip.
  const auto box = FeasibleRegion::box(Vector({0, 0}), Vector({1, 1}));
  const Vector b = box.project(Vector({-2.0, 0.25}));
  CHECK(b[0] == 0.0);
  CHECK(b[1] == 0.25);

  // Clip already satisfies the budget.
  const auto cs = FeasibleRegion::capped_simplex(2, 3);
  const Vector c = cs.project(Vector({2.0, 2.0, 0.0}));
  CHECK(c[0] == 1.0);
  CHECK(c[1] == 1.0);
  CHECK(c[2] == 0.0);
}

TEST_CASE("points inside a region are fixed points") {
  rng::Engine eng = rng::make_engine(7);
  for (const auto& region : sample_regions()) {
    for (int rep = 0; rep < 20; ++rep) {
      // Project a random point to get a feasible one, then re-project.
      const Vector z = region.project(Vector(random_point(eng, region.dimension(), -3.0, 6.0)));
      const Vector z2 = region.project(z);
      for (int i = 0; i < z.dimension(); ++i) CHECK(std::abs(z2[i] - z[i]) <= 1e-10);
      CHECK(region.contains(z, 1e-9));
    }
  }
}

TEST_CASE("capped simplex projection against the Dykstra oracle and the sort form") {
  rng::Engine eng = rng::make_engine(42);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + static_cast<int>(rng::uniform_int(eng, 10));
    const int k = 1 + static_cast<int>(rng::uniform_int(eng, n));
    const std::vector<double> x = random_point(eng, n, -1.5, 2.5);
    const std::vector<double> got = capped_simplex_project(x, k);
    const std::vector<double> oracle = dykstra_simplex_oracle(x, k);
    const std::vector<double> sorted = serial_ref::capped_simplex_project(x, k);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(got[static_cast<std::size_t>(i)] ==
            doctest::Approx(oracle[static_cast<std::size_t>(i)]).epsilon(1e-7));
      CHECK(got[static_cast<std::size_t>(i)] ==
            doctest::Approx(sorted[static_cast<std::size_t>(i)]).epsilon(1e-8));
      CHECK(got[static_cast<std::size_t>(i)] >= 0.0);
      CHECK(got[static_cast<std::size_t>(i)] <= 1.0);
      sum += got[static_cast<std::size_t>(i)];
    }
    CHECK(sum <= k + 1e-9);
  }

  // The worked example: k=1, x=(0.9, 0.8, 0.1).
  const std::vector<double> y = capped_simplex_project({0.9, 0.8, 0.1}, 1);
  const std::vector<double> o = dykstra_simplex_oracle({0.9, 0.8, 0.1}, 1);
  for (int i = 0; i < 3; ++i)
    CHECK(y[static_cast<std::size_t>(i)] ==
          doctest::Approx(o[static_cast<std::size_t>(i)]).epsilon(1e-7));
}

TEST_CASE("projection properties: idempotence, non-expansiveness, variational inequality") {
  rng::Engine eng = rng::make_engine(314);
  for (const auto& region : sample_regions()) {
    for (int rep = 0; rep < 170; ++rep) {  // ~1000 pairs across six regions
      const Vector a(random_point(eng, region.dimension(), -4.0, 7.0));
      const Vector b(random_point(eng, region.dimension(), -4.0, 7.0));
      const Vector pa = region.project(a);
      const Vector pb = region.project(b);

      // Idempotence.
      const Vector paa = region.project(pa);
      double drift = 0.0;
      for (int i = 0; i < pa.dimension(); ++i) drift = std::max(drift, std::abs(paa[i] - pa[i]));
      CHECK(drift <= 1e-10);

      // Non-expansiveness.
      CHECK(norm(axpy(pa, -1.0, pb)) <= norm(axpy(a, -1.0, b)) + 1e-10);

      // Variational inequality with a feasible z.
      const Vector z = region.project(Vector(random_point(eng, region.dimension(), -4.0, 7.0)));
      double ip = 0.0;
      for (int i = 0; i < pa.dimension(); ++i) ip += (a[i] - pa[i]) * (z[i] - pa[i]);
      CHECK(ip <= 1e-8);
    }
  }
}

TEST_CASE("Dykstra projection snaps exactly feasible") {
  const auto region = FeasibleRegion::frobenius_ball_intersect_box(Vector({4.5, 4.5, 0.5}), 0.8, 0, 5);
  const Vector p = region.project(Vector({9.0, 9.0, -3.0}));
  CHECK(region.contains(p, 1e-12));
}

TEST_CASE("gradient step") {
  // q(x) = ||x||^2 with gradient 2x: x=(1,0), gamma=0.25 -> (0.5, 0).
  ModularQuadraticSpec spec;
  spec.a = {0.0};
  spec.b = {0.0};
  spec.dimension = 2;
  spec.q_coef = 1.0;
  const auto obj = build_modular_quadratic(spec);
  const auto region = FeasibleRegion::euclidean_ball(Vector::zeros(2), 10.0);
  const Vector next =
      gradient_step(*obj, Vector({1.0, 0.0}), SubsetSelection::empty(1), 0.25, region);
  CHECK(next[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(next[1] == 0.0);
  CHECK_THROWS_AS(
      gradient_step(*obj, Vector({1.0, 0.0}), SubsetSelection::empty(1), 0.0, region),
      PreconditionError);
}

TEST_CASE("gradient step descends when gamma <= 1/L") {
  rng::Engine eng = rng::make_engine(777);
  for (int rep = 0; rep < 100; ++rep) {
    const int d = 3;
    ModularQuadraticSpec spec;
    spec.dimension = d;
    const int n = 3;
    for (int e = 0; e < n; ++e) {
      spec.a.push_back(rng::uniform(eng, 0.0, 2.0));
      spec.b.push_back(rng::uniform(eng, 0.1, 1.5));
      spec.centers.push_back(random_point(eng, d, -1.0, 1.0));
    }
    spec.q_coef = rng::uniform(eng, 0.1, 1.0);
    spec.q_center = random_point(eng, d, -1.0, 1.0);
    const auto obj = build_modular_quadratic(spec);
    const auto region = FeasibleRegion::euclidean_ball(Vector::zeros(d), 5.0);
    const Vector x = region.project(Vector(random_point(eng, d, -4.0, 4.0)));
    const SubsetSelection s(n, {0, 2});
    const double gamma = 1.0 / obj->smoothness();
    const Vector next = gradient_step(*obj, x, s, gamma, region);
    CHECK(obj->value(next, s) <= obj->value(x, s) + 1e-12);
  }
}

TEST_CASE("inner minimization on quadratics") {
  // f(x, S) = ||x - c||^2 + 1 with c inside the ball: minimizer c, value 1.
  ModularQuadraticSpec spec;
  spec.a = {0.0};
  spec.b = {0.0};
  spec.dimension = 2;
  spec.q_coef = 1.0;
  spec.q_center = {0.3, -0.4};
  spec.q_constant = 1.0;
  const auto obj = build_modular_quadratic(spec);
  const auto ball = FeasibleRegion::euclidean_ball(Vector::zeros(2), 2.0);
  const auto res = minimize_over_x(*obj, SubsetSelection::empty(1), ball, 1e-10, 100000);
  CHECK(res.converged);
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(res.x[0] == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(res.x[1] == doctest::Approx(-0.4).epsilon(1e-6));

  // ||c|| > r: minimizer is the radial projection of c.
  ModularQuadraticSpec far = spec;
  far.q_center = {6.0, 8.0};
  far.q_constant = 0.0;
  const auto obj2 = build_modular_quadratic(far);
  const auto ball1 = FeasibleRegion::euclidean_ball(Vector::zeros(2), 1.0);
  const auto res2 = minimize_over_x(*obj2, SubsetSelection::empty(1), ball1, 1e-10, 100000);
  CHECK(res2.x[0] == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(res2.x[1] == doctest::Approx(0.8).epsilon(1e-6));

  // Iteration cap reached: flagged, not thrown.
  const auto res3 = minimize_over_x(*obj2, SubsetSelection::empty(1), ball1, 1e-12, 2);
  CHECK(!res3.converged);
  CHECK(res3.iterations == 2);
}

TEST_CASE("inner minimization agrees with a long-horizon reference run") {
  rng::Engine eng = rng::make_engine(606);
  // Random facility-location instance; compare against a much tighter run.
  ConvexFacilityLocationSpec fspec;
  fspec.block_size = 3;
  fspec.num_blocks = 4;
  fspec.lambda = 1.0;
  fspec.q.resize(16);
  for (auto& q : fspec.q) {
    std::vector<double> a(9);
    for (double& v : a) v = rng::uniform_unit(eng);
    q.assign(9, 0.0);
    for (int r = 0; r < 3; ++r)
      for (int c2 = 0; c2 < 3; ++c2) {
        double acc = 0.0;
        for (int t = 0; t < 3; ++t) acc += a[static_cast<std::size_t>(t) * 3 + r] * a[static_cast<std::size_t>(t) * 3 + c2];
        q[static_cast<std::size_t>(r) * 3 + c2] = acc + (r == c2 ? 0.1 : 0.0);
      }
  }
  const auto obj = build_convex_facility_location(fspec);
  const auto region = FeasibleRegion::product_of_balls({3, 3, 3, 3}, {1, 1, 1, 1}, true);
  const SubsetSelection s(4, {1, 3});
  const auto coarse = minimize_over_x(*obj, s, region, 1e-6, 200000);
  const auto fine = minimize_over_x(*obj, s, region, 1e-9, 1000000);
  CHECK(std::abs(coarse.value - fine.value) <= 1e-4);
}

TEST_CASE("step schedules") {
  const auto s = StepSchedule::constant_over_sqrt_t(2.0);
  CHECK(s.gamma(1, 16) == doctest::Approx(0.5));
  CHECK(s.gamma(9, 16) == doctest::Approx(0.5));
  const auto c = StepSchedule::constant(0.125);
  CHECK(c.gamma(3, 10) == 0.125);
  CHECK_THROWS_AS(StepSchedule::constant(0.0).gamma(1, 10), PreconditionError);
}
