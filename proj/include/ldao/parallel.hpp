#pragma once

#include <cstddef>
#include <functional>

namespace ldao {

// Worker cap from the LDAO_THREADS environment variable.
// Unset, empty, or 0 means auto (hardware concurrency). Read on every call
// so a process can change it between pipeline runs.
int worker_count();

// Runs fn(i) for every i in [0, n). Each work item computes independently
// and writes only to its own slot in caller-owned storage, so the result is
// identical for any worker count. threads <= 0 selects worker_count().
// The first exception thrown by any item is rethrown in the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int threads = 0);

} // namespace ldao
