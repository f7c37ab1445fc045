#ifndef VOIDCRYSTAL_PARALLEL_HPP
#define VOIDCRYSTAL_PARALLEL_HPP

#include <atomic>
#include <thread>
#include <vector>

namespace voidcrystal {

// Runs f(0..n-1) over `threads` workers. Tasks must be pure or write only
// to their own output slot; results are then independent of the degree.
template <class F>
void parallel_for(int n, int threads, F&& f) {
  if (threads < 1) threads = 1;
  if (threads > n) threads = n;
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) return;
        f(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

inline int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}

#endif
