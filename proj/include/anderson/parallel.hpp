#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace anderson {

// Worker count to use: explicit request wins, 0 means hardware default.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, count). Items must be independent; callers key
// results by index so the output is identical for any worker count.
template <typename Fn>
void parallel_for_index(std::int64_t count, int workers, Fn&& fn) {
  workers = resolve_workers(workers);
  if (workers <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto body = [&]() {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  int spawn = static_cast<int>(std::min<std::int64_t>(workers, count));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(spawn > 0 ? spawn - 1 : 0));
  for (int t = 1; t < spawn; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace anderson
