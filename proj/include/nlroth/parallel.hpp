#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace nlroth {

/// Process-wide worker count used by every parallel loop. 0 means hardware
/// concurrency. Results never depend on this value: work is split per index
/// and reduced in index order.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Indices are handed out dynamically; the first
/// exception thrown by any worker is rethrown on the calling thread.
template <class Body>
void parallel_for(std::int64_t n, Body&& body) {
  if (n <= 0) return;
  const unsigned workers = static_cast<unsigned>(
      std::min<std::int64_t>(static_cast<std::int64_t>(thread_count()), n));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    try {
      for (std::int64_t i = next++; i < n; i = next++) body(i);
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// Evaluates f(i) for every index into a vector, so callers can reduce the
/// partials sequentially in a fixed order.
template <class T, class F>
std::vector<T> parallel_map(std::int64_t n, F&& f) {
  std::vector<T> out(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
  parallel_for(n, [&](std::int64_t i) { out[static_cast<std::size_t>(i)] = f(i); });
  return out;
}

}  // namespace nlroth
