#pragma once

#include <cstddef>
#include <functional>

namespace roydennet {

/// Worker count used by parallel_for. 0 selects hardware concurrency.
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Calls body(i) for every i in [0, n). Each index runs exactly once; callers
/// write results to per-index slots so output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace roydennet
