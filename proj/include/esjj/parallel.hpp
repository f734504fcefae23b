#pragma once

#include <cstddef>
#include <functional>

namespace esjj {

// Number of workers: ESJJ_THREADS if set and > 0, else hardware concurrency.
unsigned worker_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous index blocks, one
// per worker; every fn(i) writes only to slot i of its output, so results are
// identical for any thread count. Falls back to a plain loop for small n.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  std::size_t min_grain = 64);

} // namespace esjj
