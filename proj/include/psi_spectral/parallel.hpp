#pragma once

#include <cstddef>
#include <functional>

namespace psi_spectral {

/// Worker count: hardware concurrency, capped by PSI_SPECTRAL_THREADS when set.
int worker_count();

/// Runs body(i) for i in [0, n) across worker_count() threads (strided split).
/// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace psi_spectral
