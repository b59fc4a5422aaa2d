#pragma once

#include <cstddef>
#include <functional>

namespace cgclust {

// Upper bound on worker threads used by parallel_for. Zero means
// std::thread::hardware_concurrency(). Results never depend on this value:
// every parallel loop writes to per-index slots and reduces sequentially.
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs body(i) for i in [0, n). Calls made from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cgclust
