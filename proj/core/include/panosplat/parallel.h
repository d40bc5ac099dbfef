#pragma once

#include <cstdint>

namespace panosplat {

/// Number of worker threads used by every parallel loop in the library.
/// Defaults to the hardware concurrency; results never depend on it.
int worker_count();
void set_worker_count(int n);

/// Runs body(i) for i in [begin, end). Bodies must not throw and must write
/// only to locations owned by their index.
template <class Body>
void parallel_for(std::int64_t begin, std::int64_t end, Body&& body) {
  const int workers = worker_count();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) if (workers > 1)
  for (std::int64_t i = begin; i < end; ++i) body(i);
}

}  // namespace panosplat
