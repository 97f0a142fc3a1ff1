#ifndef ISOFLOW_PARALLEL_HPP
#define ISOFLOW_PARALLEL_HPP

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace isoflow {

// Execution policy for the per-cell kernels. Serial is the reference
// implementation kept for testing; Parallel runs the same loop bodies
// under OpenMP. Every kernel computes each output element independently,
// so the two policies produce bitwise-identical results.
enum class Exec { Serial, Parallel };

template <typename Fn>
inline void parallel_for(std::ptrdiff_t n, Exec exec, Fn&& body) {
#ifdef _OPENMP
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
        return;
    }
#else
    (void)exec;
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace isoflow

#endif
