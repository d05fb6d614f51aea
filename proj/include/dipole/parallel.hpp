#pragma once

// Minimal worker pool: evaluates f(0..count-1) on up to DIPOLE_NUM_THREADS threads and
// returns the results in index order.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace dipole {

/// Worker count: DIPOLE_NUM_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
inline unsigned worker_count() {
  if (const char* env = std::getenv("DIPOLE_NUM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

template <class F>
auto parallel_map(std::size_t count, F&& f, unsigned workers = worker_count()) {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out(count);
  workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(count, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace dipole
