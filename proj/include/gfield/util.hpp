#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace gfield {

// Worker cap: GFIELD_THREADS env var, else hardware concurrency.
inline std::size_t thread_count() {
  if (const char* env = std::getenv("GFIELD_THREADS")) {
    const long v = std::atol(env);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

// Static block partition: the result of the loop body must not depend on
// which thread runs which block, so outputs are identical for any cap.
inline void parallel_for(std::size_t begin, std::size_t end,
                         const std::function<void(std::size_t, std::size_t)>& body,
                         std::size_t min_grain = 1024) {
  const std::size_t n = end > begin ? end - begin : 0;
  std::size_t workers = thread_count();
  if (workers > 1 && n / workers < min_grain) workers = n >= min_grain ? n / min_grain : 1;
  if (workers <= 1 || n == 0) {
    if (n) body(begin, end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = begin + w * chunk;
    if (lo >= end) break;
    const std::size_t hi = std::min(end, lo + chunk);
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

// Fixed-order pairwise summation: deterministic for a given input,
// independent of thread count, and more accurate than a running sum.
inline double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

} // namespace gfield
