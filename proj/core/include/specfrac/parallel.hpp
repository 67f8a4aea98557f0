#pragma once

#include <cstddef>
#include <functional>

namespace specfrac {

// Process-wide worker count for parallel_for. 0 restores the hardware default.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs fn(i) for i in [0, n). Work is chunked over the configured worker
// count; each index is visited exactly once, so writes to disjoint slots
// need no synchronization. Falls back to a plain loop when one worker
// suffices. Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace specfrac
