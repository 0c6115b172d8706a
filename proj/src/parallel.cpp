#include "hashvault/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hashvault {

int effective_jobs(int jobs) {
  if (jobs > 0) return jobs;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace hashvault
