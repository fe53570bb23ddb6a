#pragma once

#include <cstddef>
#include <functional>

namespace profscreen {

/// PROFSCREEN_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
unsigned default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work is
/// handed out by an atomic counter; callers write results into slot i so
/// the outcome never depends on scheduling. If any body throws, the
/// exception from the lowest index is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace profscreen
