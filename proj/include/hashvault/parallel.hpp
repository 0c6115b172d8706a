#pragma once

namespace hashvault {

/// Worker count handed to OpenMP kernels. `jobs <= 0` selects the runtime
/// default; 1 means the serial reference kernels are used instead.
int effective_jobs(int jobs);

/// True when the library was built with OpenMP.
bool openmp_enabled();

}  // namespace hashvault
