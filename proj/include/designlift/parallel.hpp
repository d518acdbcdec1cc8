#pragma once

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace designlift {

// Runs f(i) for i in [0, count). Iterations must be independent; results that
// feed a reduction must be written to per-index slots and combined serially
// afterwards so the aggregate is identical for every thread count.
template <class F>
void parallel_for_index(std::ptrdiff_t count, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < count; ++i) f(i);
}

// Same contract, dynamic scheduling; for coarse tasks of uneven cost such as
// per-trial solver runs.
template <class F>
void parallel_for_tasks(std::ptrdiff_t count, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::ptrdiff_t i = 0; i < count; ++i) f(i);
}

template <class F>
void serial_for_index(std::ptrdiff_t count, F&& f) {
    for (std::ptrdiff_t i = 0; i < count; ++i) f(i);
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace designlift
