#pragma once

#include <cstddef>
#include <functional>

namespace tul {

/// Number of worker threads the toolkit uses (>= 1). Defaults to the
/// hardware concurrency, capped at 8; TUL_THREADS overrides.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs fn(begin, end) over a static partition of [0, n) across the
/// worker threads and blocks until done. Partitioning depends only on n
/// and the thread count, so outputs written to disjoint ranges are
/// reproducible run to run.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace tul
