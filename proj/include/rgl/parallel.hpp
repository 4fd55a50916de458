// Index-based worker pool. Callers own output slots indexed by item, so the
// result is identical for any job count.
#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rgl {

inline int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? int(hc) : 1;
}

// Runs fn(i) for every i in [0, n). fn must only write to state owned by
// index i (or otherwise commutative state).
inline void parallel_for(std::uint64_t n, int jobs,
                         const std::function<void(std::uint64_t)>& fn) {
  jobs = resolve_jobs(jobs);
  if (n == 0) return;
  if (jobs <= 1 || n == 1) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> counter{0};
  std::uint64_t chunk = n / (std::uint64_t(jobs) * 8);
  if (chunk == 0) chunk = 1;
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&]() {
    for (;;) {
      std::uint64_t begin = counter.fetch_add(chunk);
      if (begin >= n) return;
      std::uint64_t end = begin + chunk < n ? begin + chunk : n;
      try {
        for (std::uint64_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rgl
