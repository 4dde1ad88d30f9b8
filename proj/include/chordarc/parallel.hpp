#pragma once

namespace chordarc {

// Applies CHORDARC_THREADS (a positive integer) as the OpenMP thread cap.
// Returns the resulting maximum thread count. Invalid values are ignored.
int configure_threads_from_env();

int max_threads();

}  // namespace chordarc
