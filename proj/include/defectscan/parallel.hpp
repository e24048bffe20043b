#pragma once

#include <cstddef>
#include <functional>

namespace defectscan {

/// Worker count: DEFECTSCAN_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for every i in [0, n). Iterations are split into contiguous
/// chunks across worker_count() threads; the first exception thrown by any
/// iteration is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace defectscan
