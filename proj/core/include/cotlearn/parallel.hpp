#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cotlearn {

/// Resolves a requested worker count; 0 means "all hardware threads".
inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Splits [0, n) into contiguous chunks and runs fn(begin, end) on each from
/// a pool of `workers` threads. Chunks are claimed in order but may finish in
/// any order, so fn must only write to per-index slots. The first exception
/// thrown by any chunk is rethrown on the caller.
template <typename Fn>
void parallel_for(std::uint64_t n, unsigned workers, Fn&& fn, std::uint64_t grain = 256) {
  if (n == 0) return;
  workers = resolve_workers(workers);
  grain = std::max<std::uint64_t>(grain, 1);
  if (workers == 1 || n <= grain) {
    fn(std::uint64_t{0}, n);
    return;
  }
  std::mutex mu;
  std::uint64_t next = 0;
  std::exception_ptr failure;
  auto work = [&] {
    for (;;) {
      std::uint64_t begin;
      {
        std::lock_guard lock(mu);
        if (next >= n || failure) return;
        begin = next;
        next = std::min(n, next + grain);
      }
      try {
        fn(begin, std::min(n, begin + grain));
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  const auto count = static_cast<unsigned>(std::min<std::uint64_t>(workers, (n + grain - 1) / grain));
  pool.reserve(count);
  for (unsigned i = 0; i < count; ++i) pool.emplace_back(work);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace cotlearn
