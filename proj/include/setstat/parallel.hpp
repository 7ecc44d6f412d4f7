#pragma once

#include <cstddef>
#include <functional>

namespace setstat {

/// Worker count: hardware concurrency, capped by SETSTAT_THREADS when set.
int worker_count();

/// Runs body(i) for i in [0, count) on the worker pool. Each index is
/// processed exactly once; the first exception (lowest index) is rethrown
/// after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace setstat
