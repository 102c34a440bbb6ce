#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace schro {

// Execution policy for the data-parallel kernels. Every parallel kernel has
// a serial twin used as the reference in tests; results must be bitwise
// identical because each work item is computed independently and reductions
// run in a fixed order.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace schro
