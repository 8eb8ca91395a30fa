#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace oscdecay {

/// Number of worker threads: the OSCDECAY_THREADS environment variable when
/// set to a positive integer, otherwise the hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("OSCDECAY_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(i) for i in [0, count) across worker threads. Each index is
/// claimed exactly once; fn must write only to per-index state so the result
/// is independent of scheduling. Runs inline when one worker suffices.
template <typename Fn>
void run_parallel(std::size_t count, Fn&& fn) {
  unsigned workers = worker_count();
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  if (workers > count) workers = static_cast<unsigned>(count);
  std::atomic<std::size_t> cursor{0};
  auto body = [&] {
    while (true) {
      std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
}

}  // namespace oscdecay
