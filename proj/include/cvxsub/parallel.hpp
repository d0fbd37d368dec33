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

#ifndef CVXSUB_PARALLEL_HPP
#define CVXSUB_PARALLEL_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace cvxsub::par {

// OpenMP kernels with deterministic reductions.
//
// Every reduction here decomposes [0, n) into fixed-size chunks, computes one
// partial per chunk (each partial is evaluated by straight-line serial code,
// so it does not depend on which thread runs it), and combines the partials
// serially in chunk order. Results are therefore bit-identical across runs,
// across thread counts, and with parallelism disabled entirely.

// Process-wide switch. Defaults to on when compiled with OpenMP.
bool enabled();
void set_enabled(bool on);

// Number of worker threads the kernels would use right now.
int worker_count();

inline constexpr std::int64_t kSumChunk = 2048;
inline constexpr std::int64_t kArgmaxChunk = 64;
inline constexpr std::int64_t kMinParallelChunks = 2;

namespace detail {
// Runs body(chunk_index) for every chunk, in parallel when worthwhile.
void run_chunks(std::int64_t num_chunks, void* ctx, void (*body)(void*, std::int64_t));

template <class F>
void for_each_chunk(std::int64_t num_chunks, F&& f) {
  run_chunks(num_chunks, &f, [](void* ctx, std::int64_t c) { (*static_cast<F*>(ctx))(c); });
}
}  // namespace detail

// Deterministic chunked sum of term(i) for i in [0, n).
template <class Term>
double sum(std::int64_t n, Term&& term) {
  if (n <= 0) return 0.0;
  const std::int64_t chunks = (n + kSumChunk - 1) / kSumChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
  detail::for_each_chunk(chunks, [&](std::int64_t c) {
    const std::int64_t lo = c * kSumChunk;
    const std::int64_t hi = std::min(n, lo + kSumChunk);
    double acc = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(c)] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// Deterministic argmax of score(i) over [0, n); ties resolve to the smallest
// index, exactly as a left-to-right serial scan would.
template <class Score>
std::pair<std::int64_t, double> argmax(std::int64_t n, Score&& score) {
  const std::int64_t chunks = (n + kArgmaxChunk - 1) / kArgmaxChunk;
  std::vector<std::pair<std::int64_t, double>> partial(
      static_cast<std::size_t>(chunks), {-1, 0.0});
  detail::for_each_chunk(chunks, [&](std::int64_t c) {
    const std::int64_t lo = c * kArgmaxChunk;
    const std::int64_t hi = std::min(n, lo + kArgmaxChunk);
    std::int64_t best_i = -1;
    double best_v = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      const double v = score(i);
      if (best_i < 0 || v > best_v) {
        best_i = i;
        best_v = v;
      }
    }
    partial[static_cast<std::size_t>(c)] = {best_i, best_v};
  });
  std::int64_t best_i = -1;
  double best_v = 0.0;
  for (const auto& [i, v] : partial) {
    if (i < 0) continue;
    if (best_i < 0 || v > best_v) {
      best_i = i;
      best_v = v;
    }
  }
  return {best_i, best_v};
}

// Plain parallel loop; body(i) must be independent across i.
template <class Body>
void for_each(std::int64_t n, Body&& body) {
  if (n <= 0) return;
  const std::int64_t chunk = 256;
  const std::int64_t chunks = (n + chunk - 1) / chunk;
  detail::for_each_chunk(chunks, [&](std::int64_t c) {
    const std::int64_t lo = c * chunk;
    const std::int64_t hi = std::min(n, lo + chunk);
    for (std::int64_t i = lo; i < hi; ++i) body(i);
  });
}

// Deterministic chunked accumulation of dim-dimensional vectors:
// out[d] = sum_i term(i)[d], with term(i) written into a caller-provided
// scratch row. Partials per chunk combine serially in chunk order.
template <class TermInto>
std::vector<double> sum_vectors(std::int64_t n, std::int64_t dim, TermInto&& term_into) {
  const std::int64_t chunk = 64;
  const std::int64_t chunks = (n + chunk - 1) / chunk;
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(chunks));
  detail::for_each_chunk(chunks, [&](std::int64_t c) {
    const std::int64_t lo = c * chunk;
    const std::int64_t hi = std::min(n, lo + chunk);
    std::vector<double> acc(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> row(static_cast<std::size_t>(dim), 0.0);
    for (std::int64_t i = lo; i < hi; ++i) {
      term_into(i, row);
      for (std::int64_t d = 0; d < dim; ++d) acc[static_cast<std::size_t>(d)] += row[static_cast<std::size_t>(d)];
    }
    partial[static_cast<std::size_t>(c)] = std::move(acc);
  });
  std::vector<double> total(static_cast<std::size_t>(dim), 0.0);
  for (const auto& p : partial) {
    if (p.empty()) continue;
    for (std::int64_t d = 0; d < dim; ++d) total[static_cast<std::size_t>(d)] += p[static_cast<std::size_t>(d)];
  }
  return total;
}

}  // namespace cvxsub::par

#endif  // CVXSUB_PARALLEL_HPP
