#ifndef HARMEX_PARALLEL_HPP
#define HARMEX_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace harmex {

/// Worker count: hardware concurrency, capped by HARMEX_THREADS when set.
inline int worker_count() {
  int count = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("HARMEX_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) count = std::min(count, cap);
  }
  return count;
}

namespace detail {
inline thread_local bool in_parallel_region = false;

struct RegionGuard {
  bool saved = in_parallel_region;
  RegionGuard() { in_parallel_region = true; }
  ~RegionGuard() { in_parallel_region = saved; }
};
}  // namespace detail

/// Calls body(i) for i in [0, count). Each index is written by exactly one
/// worker, so callers that store results by index get the same output for
/// any thread count. The first exception thrown by a worker is rethrown.
/// Calls made from inside a worker run serially on that worker.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const int workers = static_cast<int>(std::min<std::size_t>(count, static_cast<std::size_t>(worker_count())));
  if (workers <= 1 || detail::in_parallel_region) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    detail::RegionGuard guard;
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace harmex

#endif  // HARMEX_PARALLEL_HPP
