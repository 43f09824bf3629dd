#pragma once

#include <cstddef>
#include <functional>

namespace dpbandit {

/// Worker count: DPBANDIT_THREADS if set to a positive integer, otherwise the
/// machine's hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls body(i) for every i in [0, n) on up to `workers` threads. Each index
/// is visited exactly once; callers write results into slot i so the outcome
/// does not depend on scheduling. The first exception thrown by any body is
/// rethrown after all workers join.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace dpbandit
