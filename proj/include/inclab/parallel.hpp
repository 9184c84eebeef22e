#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace inclab {

/// Worker count: INCLAB_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Runs body(begin, end) over disjoint chunks of [0, n). The first exception
/// thrown by any chunk is rethrown on the calling thread.
template <class Body>
void parallel_chunks(std::size_t n, Body body, std::size_t min_chunk = 64) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(thread_count(), (n + min_chunk - 1) / min_chunk));
  if (workers <= 1) {
    if (n > 0) body(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = std::max(min_chunk, n / (workers * 8) + 1);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= n) return;
      try {
        body(begin, std::min(n, begin + chunk));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace inclab
