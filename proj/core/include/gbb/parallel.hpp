#pragma once

#include <cstddef>
#include <functional>

namespace gbb {

/// Worker count: GBB_THREADS when set to a positive integer, else hardware concurrency.
std::size_t default_thread_count();

/// Runs body(chunk) for chunk in [0, chunks) on up to `threads` workers.
/// Chunks are independent; callers assemble results by chunk index so the
/// outcome never depends on scheduling. The first exception thrown by any
/// chunk is rethrown after all workers join.
void parallel_for_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body,
                         std::size_t threads = default_thread_count());

}  // namespace gbb
