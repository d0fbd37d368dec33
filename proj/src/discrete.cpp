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

#include "cvxsub/discrete.hpp"

#include <limits>

#include "cvxsub/parallel.hpp"

namespace cvxsub {

GreedyResult greedy(const Objective& obj, const MatroidConstraint& c, const Vector& x) {
  if (c.ground_set_size() != obj.ground_set_size())
    throw PreconditionError("objective/constraint ground-set mismatch");
  auto ctx = obj.context(x);
  ctx->set_base(SubsetSelection::empty(obj.ground_set_size()));
  GreedyTrace trace;
  for (;;) {
    const std::vector<ElementId> cands = c.feasible_additions(ctx->base_set());
    if (cands.empty()) break;
    const auto [idx, best_gain] = par::argmax(
        static_cast<std::int64_t>(cands.size()),
        [&](std::int64_t i) { return ctx->gain(cands[static_cast<std::size_t>(i)]); });
    const ElementId e = cands[static_cast<std::size_t>(idx)];
    trace.picks.push_back({e, best_gain});
    ctx->advance_base(e);
  }
  return {ctx->base_set(), std::move(trace)};
}

SubsetSelection replacement_greedy(const Objective& obj, int k, const Vector& x,
                                   const SubsetSelection& s) {
  if (s.ground_set_size() != obj.ground_set_size())
    throw PreconditionError("objective/subset ground-set mismatch");
  if (k < 0) throw PreconditionError("cap k must be nonnegative");
  if (s.cardinality() > k) throw PreconditionError("|s| must not exceed k");
  const int n = obj.ground_set_size();
  if (k == 0) return s;
  auto ctx = obj.context(x);

  if (s.cardinality() < k) {
    std::vector<ElementId> cands;
    for (ElementId e = 0; e < n; ++e)
      if (!s.contains(e)) cands.push_back(e);
    if (cands.empty()) return s;
    ctx->set_base(s);
    const auto [idx, gain] = par::argmax(
        static_cast<std::int64_t>(cands.size()),
        [&](std::int64_t i) { return ctx->gain(cands[static_cast<std::size_t>(i)]); });
    (void)gain;
    return s.with(cands[static_cast<std::size_t>(idx)]);
  }

  // At capacity: drop the element whose removal hurts least, then add the
  // best replacement over V minus the retained elements (e* included).
  ElementId removed = -1;
  double best_kept = -std::numeric_limits<double>::infinity();
  for (ElementId e : s.elements()) {
    const double kept = ctx->value(s.without(e));
    if (kept > best_kept) {
      best_kept = kept;
      removed = e;
    }
  }
  const SubsetSelection reduced = s.without(removed);
  ctx->set_base(reduced);
  std::vector<ElementId> cands;
  for (ElementId e = 0; e < n; ++e)
    if (!reduced.contains(e)) cands.push_back(e);
  const auto [idx, gain] = par::argmax(
      static_cast<std::int64_t>(cands.size()),
      [&](std::int64_t i) { return ctx->gain(cands[static_cast<std::size_t>(i)]); });
  (void)gain;
  return reduced.with(cands[static_cast<std::size_t>(idx)]);
}

namespace {

std::int64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::int64_t out = 1;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

}  // namespace

std::int64_t count_independent_sets(const MatroidConstraint& c, std::int64_t cap) {
  const std::int64_t saturate = cap + 1;
  if (c.is_uniform()) {
    std::int64_t total = 0;
    for (int i = 0; i <= c.uniform_k(); ++i) {
      total += binomial(c.ground_set_size(), i);
      if (total > cap) return saturate;
    }
    return total;
  }
  std::vector<std::int64_t> per_block(static_cast<std::size_t>(c.num_blocks()), 0);
  std::vector<int> block_sizes(static_cast<std::size_t>(c.num_blocks()), 0);
  for (ElementId e = 0; e < c.ground_set_size(); ++e)
    ++block_sizes[static_cast<std::size_t>(c.block_of(e))];
  std::int64_t total = 1;
  for (int b = 0; b < c.num_blocks(); ++b) {
    std::int64_t block_count = 0;
    for (int i = 0; i <= c.capacities()[static_cast<std::size_t>(b)]; ++i)
      block_count += binomial(block_sizes[static_cast<std::size_t>(b)], i);
    if (total > cap / std::max<std::int64_t>(block_count, 1) + 1) return saturate;
    total *= block_count;
    if (total > cap) return saturate;
  }
  return total;
}

std::vector<std::uint32_t> enumerate_independent_masks(const MatroidConstraint& c,
                                                       std::int64_t cap) {
  const int n = c.ground_set_size();
  if (n > 24) throw SizeError("enumeration requires n <= 24");
  const std::int64_t count = count_independent_sets(c, cap);
  if (count > cap) throw SizeError("instance too large: independent-set count exceeds cap");

  // Depth-first extension by increasing element id emits masks in the
  // lexicographic order of their ascending element sequences, so a
  // first-strict-improvement scan realizes the lex tie-break for free.
  std::vector<std::uint32_t> masks;
  masks.reserve(static_cast<std::size_t>(count));
  const bool uniform = c.is_uniform();
  std::vector<int> block_counts(uniform ? 0 : static_cast<std::size_t>(c.num_blocks()), 0);
  int size = 0;
  std::uint32_t mask = 0;

  const auto can_add = [&](ElementId e) {
    if (uniform) return size < c.uniform_k();
    const int b = c.block_of(e);
    return block_counts[static_cast<std::size_t>(b)] < c.capacities()[static_cast<std::size_t>(b)];
  };

  // Explicit stack of next-candidate element per depth.
  std::vector<ElementId> chosen;
  masks.push_back(0);
  ElementId next = 0;
  for (;;) {
    bool descended = false;
    for (ElementId e = next; e < n; ++e) {
      if (can_add(e)) {
        chosen.push_back(e);
        mask |= (1u << e);
        ++size;
        if (!uniform) ++block_counts[static_cast<std::size_t>(c.block_of(e))];
        masks.push_back(mask);
        next = e + 1;
        descended = true;
        break;
      }
    }
    if (descended) continue;
    if (chosen.empty()) break;
    const ElementId e = chosen.back();
    chosen.pop_back();
    mask &= ~(1u << e);
    --size;
    if (!uniform) --block_counts[static_cast<std::size_t>(c.block_of(e))];
    next = e + 1;
  }
  return masks;
}

BruteForceResult brute_force_max(const Objective& obj, const MatroidConstraint& c, const Vector& x,
                                 std::int64_t cap) {
  if (c.ground_set_size() != obj.ground_set_size())
    throw PreconditionError("objective/constraint ground-set mismatch");
  const int n = c.ground_set_size();
  const std::vector<std::uint32_t> masks = enumerate_independent_masks(c, cap);
  auto ctx = obj.context(x);
  const auto [idx, best] = par::argmax(static_cast<std::int64_t>(masks.size()), [&](std::int64_t i) {
    return ctx->value(SubsetSelection::from_mask(n, masks[static_cast<std::size_t>(i)]));
  });
  return {SubsetSelection::from_mask(n, masks[static_cast<std::size_t>(idx)]), best};
}

}  // namespace cvxsub
