#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ridge {

/// Worker count for Monte Carlo loops. Results never depend on it: work is
/// split into fixed-size blocks whose partial results are merged in block
/// order.
struct Execution {
  unsigned threads = 1;
};

inline constexpr std::int64_t kSampleBlock = 32;

inline std::int64_t block_count(std::int64_t n, std::int64_t block = kSampleBlock) {
  return (n + block - 1) / block;
}

/// Runs body(i) for i in [0, count) across exec.threads workers. If tasks
/// throw, the exception of the lowest-indexed failing task is rethrown after
/// all workers join; tasks are claimed in index order, so this matches the
/// sequential behaviour.
template <typename Body>
void parallel_for(std::int64_t count, const Execution& exec, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::int64_t>(exec.threads, 1, std::max<std::int64_t>(count, 1)));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::int64_t failed_index = count;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ridge
