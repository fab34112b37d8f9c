#pragma once

#include <cstddef>
#include <functional>

namespace distillab {

// Worker count: min(hardware, DISTILL_LAB_THREADS when set, requested when
// nonzero). Thread count affects wall time only, never results.
std::size_t effective_threads(std::size_t requested = 0);

// Runs body(i) for i in [0, n). Exceptions are captured and the one thrown
// by the smallest index is rethrown after all workers join, so failures are
// deterministic regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace distillab
