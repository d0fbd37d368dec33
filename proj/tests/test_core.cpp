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

#include <limits>
#include <vector>

#include "cvxsub/core.hpp"
#include "cvxsub/rng.hpp"
#include "doctest.h"

using namespace cvxsub;

namespace {

SubsetSelection random_subset(rng::Engine& eng, int n, int max_size) {
  std::vector<ElementId> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  const int size = static_cast<int>(rng::uniform_int(eng, max_size + 1));
  std::vector<ElementId> chosen;
  for (int i = 0; i < size; ++i) {
    const auto at = rng::uniform_int(eng, static_cast<std::int64_t>(pool.size()));
    chosen.push_back(pool[static_cast<std::size_t>(at)]);
    pool.erase(pool.begin() + at);
  }
  return SubsetSelection(n, std::move(chosen));
}

MatroidConstraint random_constraint(rng::Engine& eng, int n) {
  if (rng::uniform_unit(eng) < 0.5)
    return MatroidConstraint::uniform(n, static_cast<int>(rng::uniform_int(eng, n + 1)));
  const int nb = 2 + static_cast<int>(rng::uniform_int(eng, 2));
  std::vector<std::vector<ElementId>> blocks(static_cast<std::size_t>(nb));
  for (int e = 0; e < n; ++e) blocks[static_cast<std::size_t>(e % nb)].push_back(e);
  std::vector<int> caps;
  for (const auto& b : blocks)
    caps.push_back(static_cast<int>(rng::uniform_int(eng, static_cast<int>(b.size()) + 1)));
  return MatroidConstraint::partition(blocks, caps);
}

}  // namespace

TEST_CASE("subset selection basics") {
  SubsetSelection s(5, {3, 1});
  CHECK(s.cardinality() == 2);
  CHECK(s.elements() == std::vector<ElementId>{1, 3});
  CHECK(s.contains(3));
  CHECK(!s.contains(0));
  CHECK(s.with(0).elements() == std::vector<ElementId>{0, 1, 3});
  CHECK(s.without(1).elements() == std::vector<ElementId>{3});
  CHECK_THROWS_AS(s.with(1), PreconditionError);
  CHECK_THROWS_AS(s.without(0), PreconditionError);
  CHECK_THROWS_AS(SubsetSelection(5, {1, 1}), PreconditionError);
  CHECK_THROWS_AS(SubsetSelection(5, {5}), PreconditionError);
  CHECK(SubsetSelection::from_mask(5, 0b01010u) == SubsetSelection(5, {1, 3}));
  CHECK(s.mask() == 0b01010u);
}

TEST_CASE("lexicographic mask order matches sequence order") {
  // {0,2} < {1}, {0} < {0,2}, {} < everything.
  CHECK(lex_mask_less(0b101, 0b010));
  CHECK(lex_mask_less(0b001, 0b101));
  CHECK(lex_mask_less(0, 0b001));
  CHECK(!lex_mask_less(0b010, 0b101));
  CHECK(!lex_mask_less(0b101, 0b101));

  const auto to_seq = [](std::uint32_t m) {
    std::vector<int> s;
    for (int i = 0; i < 6; ++i)
      if (m & (1u << i)) s.push_back(i);
    return s;
  };
  for (std::uint32_t a = 0; a < 64; ++a)
    for (std::uint32_t b = 0; b < 64; ++b)
      CHECK(lex_mask_less(a, b) == (to_seq(a) < to_seq(b)));
}

TEST_CASE("uniform independence and additions") {
  const auto c = MatroidConstraint::uniform(4, 2);
  CHECK(c.is_independent(SubsetSelection(4, {0, 3})));
  CHECK(!c.is_independent(SubsetSelection(4, {0, 1, 2})));
  CHECK(feasible_additions(c, SubsetSelection(4, {1})) == std::vector<ElementId>{0, 2, 3});
  CHECK(feasible_additions(MatroidConstraint::uniform(4, 1), SubsetSelection(4, {1})).empty());
  CHECK_THROWS_AS(c.is_independent(SubsetSelection(5, {0})), PreconditionError);
  CHECK_THROWS_AS(feasible_additions(c, SubsetSelection(4, {0, 1, 2})), PreconditionError);
}

TEST_CASE("partition independence and additions") {
  const auto c = MatroidConstraint::partition({{0, 1}, {2, 3}}, {1, 1});
  CHECK(c.is_independent(SubsetSelection(4, {0, 2})));
  CHECK(!c.is_independent(SubsetSelection(4, {0, 1})));
  CHECK(feasible_additions(c, SubsetSelection(4, {0})) == std::vector<ElementId>{2, 3});
  CHECK(c.rank() == 2);
  CHECK_THROWS_AS(MatroidConstraint::partition({{0, 1}, {1, 2}}, {1, 1}), PreconditionError);
  CHECK_THROWS_AS(MatroidConstraint::partition({{0, 1}, {3}}, {1, 1}), PreconditionError);
}

TEST_CASE("downward closure on random constraints") {
  rng::Engine eng = rng::make_engine(2024);
  int checked = 0;
  while (checked < 1000) {
    const int n = 4 + static_cast<int>(rng::uniform_int(eng, 5));
    const auto c = random_constraint(eng, n);
    const auto s = random_subset(eng, n, n);
    if (!c.is_independent(s)) continue;
    std::vector<ElementId> sub;
    for (ElementId e : s.elements())
      if (rng::uniform_unit(eng) < 0.5) sub.push_back(e);
    CHECK(c.is_independent(SubsetSelection(n, sub)));
    ++checked;
  }
}

TEST_CASE("exchange property by exhaustive search on small ground sets") {
  rng::Engine eng = rng::make_engine(99);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 4 + static_cast<int>(rng::uniform_int(eng, 5));  // n <= 8
    const auto c = random_constraint(eng, n);
    for (std::uint32_t am = 0; am < (1u << n); ++am) {
      const auto a = SubsetSelection::from_mask(n, am);
      if (!c.is_independent(a)) continue;
      for (std::uint32_t bm = 0; bm < (1u << n); ++bm) {
        const auto b = SubsetSelection::from_mask(n, bm);
        if (!c.is_independent(b) || a.cardinality() >= b.cardinality()) continue;
        bool found = false;
        for (ElementId e : b.elements()) {
          if (a.contains(e)) continue;
          if (c.is_independent(a.with(e))) {
            found = true;
            break;
          }
        }
        CHECK(found);
      }
    }
  }
}

TEST_CASE("feasible additions match the brute-force definition") {
  rng::Engine eng = rng::make_engine(5150);
  int checked = 0;
  while (checked < 300) {
    const int n = 3 + static_cast<int>(rng::uniform_int(eng, 6));
    const auto c = random_constraint(eng, n);
    const auto s = random_subset(eng, n, n);
    if (!c.is_independent(s)) continue;
    std::vector<ElementId> expect;
    for (ElementId e = 0; e < n; ++e)
      if (!s.contains(e) && c.is_independent(s.with(e))) expect.push_back(e);
    CHECK(feasible_additions(c, s) == expect);
    ++checked;
  }
}

TEST_CASE("vector validation and block access") {
  CHECK_THROWS_AS(Vector({1.0, std::numeric_limits<double>::infinity()}), NumericalError);
  CHECK_THROWS_AS(Vector({1.0, 2.0, 3.0}, {2, 2}), PreconditionError);
  Vector v({1, 2, 3, 4, 5, 6}, {2, 4});
  CHECK(v.num_blocks() == 2);
  CHECK(v.block(1).size() == 4);
  CHECK(v.block(1)[0] == 3.0);
  CHECK(dot(v, v) == doctest::Approx(91.0));
}

TEST_CASE("region construction validation") {
  CHECK_THROWS_AS(FeasibleRegion::euclidean_ball(Vector::zeros(2), 0.0), PreconditionError);
  CHECK_THROWS_AS(FeasibleRegion::box(Vector({1.0}), Vector({0.0})), PreconditionError);
  CHECK_THROWS_AS(FeasibleRegion::frobenius_ball_intersect_box(Vector({9.0}), 1.0, 0.0, 5.0),
                  PreconditionError);
  CHECK_THROWS_AS(FeasibleRegion::capped_simplex(4, 3), PreconditionError);
}
