#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace osclab {

// Runs fn(begin, end) on contiguous chunks of [0, n). Callers must write
// results to disjoint per-index slots so the outcome does not depend on the
// thread count.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    fn(0, n);
    return;
  }
  std::size_t t = static_cast<std::size_t>(threads);
  if (t > n) t = n;
  std::vector<std::thread> pool;
  pool.reserve(t);
  std::size_t chunk = (n + t - 1) / t;
  for (std::size_t w = 0; w < t; ++w) {
    std::size_t b = w * chunk;
    std::size_t e = b + chunk < n ? b + chunk : n;
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace osclab
