#ifndef DTLAB_PARALLEL_HPP
#define DTLAB_PARALLEL_HPP

#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dtlab {

// Runs body(i) for i in [0, count) on up to n_threads threads. Each worker
// owns a contiguous block of indices, so results written to per-index slots
// are deterministic regardless of scheduling. n_threads <= 1 runs inline.
template <typename Body>
void parallel_for(int n_threads, std::int64_t count, const Body& body) {
  if (n_threads <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  const int workers =
      static_cast<int>(std::min<std::int64_t>(n_threads, count));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const std::int64_t block = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = w * block;
    const std::int64_t hi = std::min<std::int64_t>(count, lo + block);
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace dtlab

#endif
