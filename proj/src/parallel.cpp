#include "chordarc/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace chordarc {

int configure_threads_from_env() {
    if (const char* s = std::getenv("CHORDARC_THREADS")) {
        char* end = nullptr;
        long n = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && n > 0 && n < 4096) omp_set_num_threads(static_cast<int>(n));
    }
    return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace chordarc
