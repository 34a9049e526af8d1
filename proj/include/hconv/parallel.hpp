#pragma once

#include <cstddef>
#include <functional>

namespace hconv {

/// Worker cap used by the parallel loops (0 = hardware concurrency).
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Calls body(i) for i in [0, n) on up to thread_count() workers. Indices are
/// handed out dynamically; callers write results by index so the outcome
/// does not depend on the schedule. The first exception thrown by a body is
/// rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hconv
