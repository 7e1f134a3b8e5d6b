#pragma once

#include <cstddef>
#include <functional>

namespace bottleneck {

/// Thread count: explicit request if > 0, else $BOTTLENECK_THREADS, else hardware concurrency.
int resolve_threads(int requested = 0);

// Runs body(i) for i in [0, count) on up to `threads` workers using a static
// block partition. Bodies must only write state owned by their index.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace bottleneck
