#pragma once

#include <cstddef>
#include <functional>

namespace ddae {

/// Worker count for fan-out loops. `requested` = 0 means "default": the
/// hardware concurrency, capped by the DDAE_THREADS environment variable.
unsigned worker_count(unsigned requested = 0);

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Indices are split
/// into contiguous blocks; fn must only write state owned by index i.
/// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace ddae
