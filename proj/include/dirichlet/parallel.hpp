#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace dirichlet {

namespace detail {
inline std::atomic<bool>& sequential_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}
}  // namespace detail

/// Forces every parallel_for onto the calling thread.
inline void set_sequential(bool on) { detail::sequential_flag() = on; }
inline bool sequential() { return detail::sequential_flag(); }

/// Runs fn(i) for i in [0, n) over contiguous chunks. Each index is handled by
/// exactly one thread, so callers that write per-index results and reduce them
/// afterwards in index order get bit-identical output with or without threads.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = sequential() ? 1 : std::min<std::size_t>(hw, n / 64 + 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace dirichlet
