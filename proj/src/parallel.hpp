#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace ptycho {

// Worker count from PTYCHO_THREADS (0 or unset = auto).
inline unsigned thread_budget() {
  const char* env = std::getenv("PTYCHO_THREADS");
  unsigned n = 0;
  if (env) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  if (n == 0) n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

// Static partition of [0, n); each worker touches a disjoint index range, so
// results are deterministic.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
  unsigned workers = thread_budget();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned t = 0; t < workers; ++t) {
    std::size_t lo = t * chunk;
    std::size_t hi = lo + chunk < n ? lo + chunk : n;
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

} // namespace ptycho
