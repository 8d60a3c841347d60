#pragma once

// parallel_for over an index range with a fixed chunk schedule.  Results must
// be written to disjoint slots so the outcome is independent of thread count.

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace su2 {

inline unsigned hardware_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, const Fn& body,
                  unsigned threads = 0) {
  if (threads == 0) threads = hardware_threads();
  const std::size_t count = end > begin ? end - begin : 0;
  if (count == 0) return;
  if (threads <= 1 || count < 2) {
    for (std::size_t i = begin; i < end; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> cursor{begin};
  const std::size_t chunk = std::max<std::size_t>(1, count / (threads * 8));
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t lo = cursor.fetch_add(chunk);
      if (lo >= end) return;
      const std::size_t hi = std::min(end, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace su2
