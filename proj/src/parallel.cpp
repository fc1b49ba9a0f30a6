#include "nsfs/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace nsfs {

int configure_threads_from_env() {
    if (const char* env = std::getenv("NS_THREADS")) {
        char* end = nullptr;
        const long requested = std::strtol(env, &end, 10);
        if (end != env && requested > 0) omp_set_num_threads(static_cast<int>(requested));
    }
    return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace nsfs
