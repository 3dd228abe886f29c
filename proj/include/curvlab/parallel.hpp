/// @file parallel.hpp
/// @brief Deterministic parallel map over index ranges.
#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace curvlab {

/// Worker count: CURVLAB_THREADS if set (>=1), else hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("CURVLAB_THREADS")) {
    const int k = std::atoi(env);
    if (k >= 1) return k;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, count). Work is split into contiguous static
/// chunks; callers write results into index-addressed slots and reduce in
/// index order afterwards, so output is identical for any worker count.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const int workers = worker_count();
  if (workers <= 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t chunks = static_cast<std::size_t>(workers);
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = count * c / chunks;
    const std::size_t hi = count * (c + 1) / chunks;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace curvlab
