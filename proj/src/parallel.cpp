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

#include "cvxsub/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cvxsub::par {

namespace {
std::atomic<bool> g_enabled{
#ifdef _OPENMP
    true
#else
    false
#endif
};
}  // namespace

bool enabled() { return g_enabled.load(std::memory_order_relaxed); }

void set_enabled(bool on) {
#ifndef _OPENMP
  on = false;
#endif
  g_enabled.store(on, std::memory_order_relaxed);
}

int worker_count() {
#ifdef _OPENMP
  return enabled() ? omp_get_max_threads() : 1;
#else
  return 1;
#endif
}

namespace detail {

void run_chunks(std::int64_t num_chunks, void* ctx, void (*body)(void*, std::int64_t)) {
  if (num_chunks <= 0) return;
#ifdef _OPENMP
  if (enabled() && num_chunks >= kMinParallelChunks && !omp_in_parallel()) {
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < num_chunks; ++c) body(ctx, c);
    return;
  }
#endif
  for (std::int64_t c = 0; c < num_chunks; ++c) body(ctx, c);
}

}  // namespace detail

}  // namespace cvxsub::par
