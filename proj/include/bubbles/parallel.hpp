#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace bubbles {

// Static block partition of [0, count). Each index is handled by exactly one
// worker, so per-index results do not depend on the thread count.
template <class Body>
void parallel_for(std::size_t count, Body&& body, std::size_t min_block = 64) {
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, std::max<std::size_t>(1, count / min_block));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (std::size_t i = 0; i < std::min(count, chunk); ++i) body(i);
}

}  // namespace bubbles
