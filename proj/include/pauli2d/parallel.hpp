#pragma once

#include <cstddef>
#include <functional>

namespace pauli2d {

// Cap on worker threads used by grid loops. 0 means hardware concurrency.
void set_max_threads(int n);
int max_threads();

// Runs body(begin, end) over contiguous chunks of [0, count). Chunks never
// share output, so results do not depend on the thread count.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace pauli2d
