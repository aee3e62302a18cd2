#pragma once

#include <cstddef>
#include <functional>

namespace driftwatch {

// Worker count used by replication-level parallelism. Reads DRIFTWATCH_THREADS
// when set (values < 1 are treated as 1), otherwise hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, count) on up to `threads` workers (0 = worker_count()).
// Work items are claimed from a shared atomic counter; the first exception
// thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace driftwatch
