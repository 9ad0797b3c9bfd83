#pragma once

#include <cstddef>
#include <functional>

namespace torreg {

// 0 means one worker per hardware thread.
unsigned resolve_threads(unsigned requested) noexcept;

/// Calls body(i) for every i in [0, count) on up to `threads` workers.
/// Indices are claimed dynamically, so body must write only to slot i of
/// any shared output for results to be independent of the thread count.
/// The first exception thrown by a worker is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace torreg
