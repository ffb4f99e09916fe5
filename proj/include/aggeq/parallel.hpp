#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aggeq {

/// Selects between the OpenMP kernels and their serial reference versions.
/// Both produce bit-identical results: parallel loops only write disjoint
/// slots and every reduction runs in a fixed order.
enum class Execution { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Runs body(i) for i in [0, n). Iterations must be independent.
template <class Body>
void for_each_index(Execution exec, std::ptrdiff_t n, Body&& body) {
  if (exec == Execution::Parallel && n > 1) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  }
}

}  // namespace aggeq
