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

// Times the OpenMP kernels against the straight serial reference on the hot
// sweeps: objective contexts, greedy, exhaustive search, Monte-Carlo and
// exact extension evaluation, and the capped-simplex projection.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cvxsub/continuous.hpp"
#include "cvxsub/discrete.hpp"
#include "cvxsub/experiments.hpp"
#include "cvxsub/multilinear.hpp"
#include "cvxsub/parallel.hpp"
#include "cvxsub/reference.hpp"
#include "cvxsub/rng.hpp"

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const std::string& name, double ref_ms, double serial_ms, double parallel_ms) {
  std::printf("%-34s %12.3f %12.3f %12.3f %9.2fx\n", name.c_str(), ref_ms, serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

}  // namespace

int main() {
  using namespace cvxsub;

  std::printf("%-34s %12s %12s %12s %10s\n", "kernel", "reference", "kernel(1t)", "kernel(omp)",
              "speedup");

  // Facility-location instance big enough to have measurable sweeps.
  const ProblemInstance inst = generate_synthetic_case(10, 50, 10, 1.0, 7);
  const Objective& obj = *inst.objective;
  rng::Engine eng = rng::make_engine(123);
  std::vector<double> xr(static_cast<std::size_t>(obj.dimension()));
  for (double& v : xr) v = rng::uniform_unit(eng);
  const Vector x = inst.region.project(Vector(xr, std::vector<int>(50, 10)));
  const auto& fspec = facility_spec(obj);
  const SubsetSelection probe(50, {1, 7, 21, 33, 48});

  {
    const auto ref = [&] { (void)serial_ref::facility_value(fspec, x.entries(), probe); };
    const auto kern = [&] { (void)obj.value(x, probe); };
    const double t_ref = time_ms(ref, 20);
    par::set_enabled(false);
    const double t1 = time_ms(kern, 20);
    par::set_enabled(true);
    const double tp = time_ms(kern, 20);
    report("facility value (context build)", t_ref, t1, tp);
  }
  {
    const auto ref = [&] { (void)serial_ref::greedy(obj, inst.constraint, x); };
    const auto kern = [&] { (void)greedy(obj, inst.constraint, x); };
    const double t_ref = time_ms(ref, 10);
    par::set_enabled(false);
    const double t1 = time_ms(kern, 10);
    par::set_enabled(true);
    const double tp = time_ms(kern, 10);
    report("greedy sweep (n=50, k=10)", t_ref, t1, tp);
  }

  // Exhaustive search on a small instance with many sets.
  const ProblemInstance small = generate_synthetic_case(4, 22, 6, 1.0, 11);
  rng::Engine eng2 = rng::make_engine(5);
  std::vector<double> xs(static_cast<std::size_t>(small.objective->dimension()));
  for (double& v : xs) v = rng::uniform_unit(eng2);
  const Vector x_small = small.region.project(Vector(xs, std::vector<int>(22, 4)));
  {
    const auto ref = [&] { (void)serial_ref::brute_force_max(*small.objective, small.constraint, x_small); };
    const auto kern = [&] { (void)brute_force_max(*small.objective, small.constraint, x_small); };
    const double t_ref = time_ms(ref, 2);
    par::set_enabled(false);
    const double t1 = time_ms(kern, 2);
    par::set_enabled(true);
    const double tp = time_ms(kern, 2);
    report("exhaustive max (n=22, k<=6)", t_ref, t1, tp);
  }

  // Continuous extension on n = 16.
  const ProblemInstance ext = generate_synthetic_case(4, 16, 4, 1.0, 3);
  rng::Engine eng3 = rng::make_engine(17);
  std::vector<double> xe(static_cast<std::size_t>(ext.objective->dimension()));
  for (double& v : xe) v = rng::uniform_unit(eng3);
  const Vector x_ext = ext.region.project(Vector(xe, std::vector<int>(16, 4)));
  std::vector<double> yv(16);
  for (double& v : yv) v = 0.2 + 0.6 * rng::uniform_unit(eng3);
  const FractionalPoint y(yv);
  {
    const auto ref = [&] { (void)serial_ref::extension_value(*ext.objective, x_ext, y); };
    const auto kern = [&] { (void)extension_value_exact(*ext.objective, x_ext, y); };
    const double t_ref = time_ms(ref, 2);
    par::set_enabled(false);
    const double t1 = time_ms(kern, 2);
    par::set_enabled(true);
    const double tp = time_ms(kern, 2);
    report("exact extension (2^16 subsets)", t_ref, t1, tp);
  }
  {
    EstimatorConfig cfg;
    cfg.samples = 20000;
    cfg.seed = 99;
    const auto kern = [&] { (void)extension_value_sampled(*ext.objective, x_ext, y, cfg); };
    par::set_enabled(false);
    const double t1 = time_ms(kern, 3);
    par::set_enabled(true);
    const double tp = time_ms(kern, 3);
    report("sampled extension (m=20000)", t1, t1, tp);
  }

  // Capped-simplex projection at recommender scale.
  {
    std::vector<double> big(400000);
    rng::Engine eng4 = rng::make_engine(31);
    for (double& v : big) v = 3.0 * rng::uniform_unit(eng4) - 1.0;
    const auto ref = [&] { (void)serial_ref::capped_simplex_project(big, 2000); };
    const auto kern = [&] { (void)capped_simplex_project(big, 2000); };
    const double t_ref = time_ms(ref, 3);
    par::set_enabled(false);
    const double t1 = time_ms(kern, 3);
    par::set_enabled(true);
    const double tp = time_ms(kern, 3);
    report("capped simplex (d=400000)", t_ref, t1, tp);
  }

  std::printf("workers available: %d\n", par::worker_count());
  return 0;
}
