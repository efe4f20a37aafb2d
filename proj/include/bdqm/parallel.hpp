#ifndef BDQM_PARALLEL_HPP
#define BDQM_PARALLEL_HPP

// Runtime switch between the serial reference kernels and the OpenMP
// kernels.  Every parallel loop in this project writes to disjoint slots
// and reduces serially afterwards, so results are identical either way;
// tests/test_parallel.cpp asserts this.

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bdqm::par {

inline bool& mode_flag() {
#ifdef _OPENMP
    static bool enabled = [] {
        const char* env = std::getenv("BDQM_SERIAL");
        return !(env && env[0] == '1');
    }();
#else
    static bool enabled = false;
#endif
    return enabled;
}

inline bool enabled() { return mode_flag(); }
inline void set_enabled(bool on) {
#ifdef _OPENMP
    mode_flag() = on;
#else
    (void)on;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
    return enabled() ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
}

// Index loop over [0, n).  Body must only touch slot i of any shared output.
template <typename F>
void parallel_for(long n, F&& body) {
#ifdef _OPENMP
    if (enabled() && n > 1) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
#endif
    for (long i = 0; i < n; ++i) body(i);
}

}  // namespace bdqm::par

#endif
