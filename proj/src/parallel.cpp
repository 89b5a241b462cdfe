#include "optirec/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace optirec {

int thread_cap() {
#ifdef _OPENMP
    int avail = omp_get_max_threads();
    if (const char* env = std::getenv("OPTIREC_THREADS")) {
        try {
            int want = std::stoi(env);
            if (want > 0 && want < avail) return want;
        } catch (...) {
            // malformed value: fall through to auto
        }
    }
    return avail;
#else
    return 1;
#endif
}

}  // namespace optirec
