#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace genhilbert {

/// Worker count used when a call does not pass one explicitly.
void set_default_jobs(int jobs);
int default_jobs();

namespace detail {
inline thread_local bool in_parallel_worker = false;
}

/// Runs body(i) for i in [0, count). Each index writes only its own result
/// slot, so the outcome does not depend on scheduling. Nested calls from a
/// worker run serially. The first exception thrown by any index is rethrown.
template <class F>
void parallel_for(std::size_t count, F&& body, int jobs = default_jobs()) {
  if (count == 0) return;
  if (jobs <= 1 || count == 1 || detail::in_parallel_worker) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_index = count;
  std::mutex failure_mutex;
  auto run = [&] {
    detail::in_parallel_worker = true;
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        // Keep the lowest failing index so the reported error is reproducible.
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
    detail::in_parallel_worker = false;
  };
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(run);
  run();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Results of f(i) for i in [0, count), in index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& f, int jobs = default_jobs()) {
  std::vector<T> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = f(i); }, jobs);
  return out;
}

}  // namespace genhilbert
