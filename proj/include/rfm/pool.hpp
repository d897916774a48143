#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rfm {

// Runs fn(0), ..., fn(count-1) on up to `threads` workers.  Callers write
// results into preallocated slots indexed by the task id, so the schedule can
// never influence the output.  The first exception thrown by any task is
// rethrown here after all workers finish.
inline void parallel_indexed(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  if (threads < 1) threads = 1;
  if (threads == 1 || count == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> workers;
  const int spawn = std::min(threads, count);
  workers.reserve(spawn);
  for (int t = 0; t < spawn; ++t) workers.emplace_back(worker);
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rfm
