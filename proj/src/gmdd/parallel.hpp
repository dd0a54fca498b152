/*
 * Copyright (C) 2026 The gmdd-test Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GMDD_PARALLEL_HPP
#define GMDD_PARALLEL_HPP

#include <cstddef>
#include <cstdint>

namespace gmdd {

// Number of worker threads used by parallel loops. Zero resets to the
// GMDD_THREADS environment variable, or the runtime default.
void set_threads(int n);
int threads();

// Runs body(i) for i in [0, n). Each index is handled by exactly one thread
// and the body must only write to index-owned storage, so results never
// depend on the schedule. Nested calls run serially.
template <typename Body> void parallel_for(std::size_t n, Body &&body) {
  const auto count = static_cast<std::int64_t>(n);
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads()) if (count > 16)
#endif
  for (std::int64_t i = 0; i < count; ++i) {
    body(static_cast<std::size_t>(i));
  }
}

} // namespace gmdd

#endif
