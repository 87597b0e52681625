#pragma once

#include <cstddef>
#include <functional>

namespace mipd {

/// Worker count: MIPD_THREADS when set to an integer ≥ 1, otherwise the
/// hardware concurrency.
std::size_t default_thread_count();

/// Calls body(begin, end) on contiguous index ranges covering [0, n), using
/// up to `threads` workers. The partition depends only on n and threads, and
/// callers write results by index, so output never depends on scheduling.
/// The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)> &body,
                  std::size_t threads = default_thread_count());

}  // namespace mipd
