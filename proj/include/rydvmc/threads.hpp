#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rydvmc {

// Worker cap for data-parallel loops. Resolution order: set_max_threads(),
// the RYDVMC_THREADS environment variable, hardware concurrency.
int max_threads();
void set_max_threads(int n);

// Data-parallel loop where body(i) writes only to slot i. Reductions over the
// slots are done serially by the caller, so results do not depend on the
// thread count.
template <typename F>
void parallel_for(long n, F&& body) {
#ifdef _OPENMP
  const int workers = max_threads();
  if (workers > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(workers)
    for (long i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
#endif
  for (long i = 0; i < n; ++i) {
    body(i);
  }
}

}  // namespace rydvmc
