#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace crs {

inline int default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// Runs fn(chunk_index) for chunk_index in [0, chunks).  Results must not
// depend on scheduling; callers write into disjoint slots or reduce under
// their own locks.
inline void parallel_for(int chunks, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = default_threads();
  if (threads == 1 || chunks <= 1) {
    for (int i = 0; i < chunks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= chunks) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int nt = std::min(threads, chunks);
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace crs
