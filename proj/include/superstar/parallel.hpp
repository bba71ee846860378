#pragma once

#include <cstddef>
#include <functional>

namespace superstar {

/// Worker count: SUPERSTAR_THREADS if set (≥ 1), otherwise the hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. body must not share mutable state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace superstar
