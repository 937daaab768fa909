#include "pathint/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace pathint {

int default_workers() {
    int workers = omp_get_max_threads();
    if (const char* env = std::getenv("PATHINT_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap > 0) workers = std::min(workers, cap);
        } catch (const std::exception&) {
            // ignore malformed values
        }
    }
    return std::max(workers, 1);
}

}  // namespace pathint
