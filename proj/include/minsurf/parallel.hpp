#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace minsurf {

// Fixed work-chunk width.  Every range scan decomposes on the same global
// grid anchored at n = 1 regardless of worker count, so aggregates that
// combine per-chunk results in chunk order (including floating-point sums)
// are bit-identical for any number of workers, and checkpoints written at
// chunk boundaries can be resumed by any later run.
inline constexpr uint64_t kChunkSize = uint64_t{1} << 16;

inline uint64_t chunk_index(uint64_t n) { return (n - 1) / kChunkSize; }

// Runs work(a, b) over the chunks of [lo, hi] on `workers` threads and
// feeds each result to consume() on the calling thread in chunk order.
// consume returns false to stop early (remaining chunks are discarded).
// A bounded reorder window keeps fast workers from racing arbitrarily far
// ahead of the consumer.
template <class Result>
void for_chunks_ordered(
    uint64_t lo, uint64_t hi, int workers,
    const std::function<Result(uint64_t, uint64_t)>& work,
    const std::function<bool(uint64_t, uint64_t, Result&&)>& consume) {
  if (lo > hi) return;
  const uint64_t first = chunk_index(lo);
  const uint64_t last = chunk_index(hi);
  auto bounds = [&](uint64_t c) {
    const uint64_t a = std::max(lo, c * kChunkSize + 1);
    const uint64_t b = std::min(hi, (c + 1) * kChunkSize);
    return std::pair<uint64_t, uint64_t>(a, b);
  };

  if (workers <= 1) {
    for (uint64_t c = first; c <= last; ++c) {
      auto [a, b] = bounds(c);
      if (!consume(a, b, work(a, b))) return;
    }
    return;
  }

  std::mutex mu;
  std::condition_variable cv;
  std::map<uint64_t, Result> ready;
  std::atomic<uint64_t> next{first};
  std::atomic<bool> cancel{false};
  std::exception_ptr failure;
  uint64_t emit = first;  // guarded by mu
  const uint64_t window = static_cast<uint64_t>(workers) + 2;

  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        if (cancel.load(std::memory_order_relaxed)) return;
        const uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
        if (c > last) return;
        auto [a, b] = bounds(c);
        try {
          Result r = work(a, b);
          std::unique_lock<std::mutex> lk(mu);
          cv.wait(lk, [&] { return cancel.load() || c < emit + window; });
          if (cancel.load()) return;
          ready.emplace(c, std::move(r));
          cv.notify_all();
        } catch (...) {
          std::lock_guard<std::mutex> lk(mu);
          if (!failure) failure = std::current_exception();
          cancel.store(true);
          cv.notify_all();
          return;
        }
      }
    });
  }

  {
    std::unique_lock<std::mutex> lk(mu);
    while (emit <= last) {
      cv.wait(lk, [&] {
        return cancel.load() ||
               (!ready.empty() && ready.begin()->first == emit);
      });
      if (cancel.load()) break;
      auto node = ready.extract(ready.begin());
      ++emit;
      cv.notify_all();
      lk.unlock();
      auto [a, b] = bounds(node.key());
      bool keep_going = true;
      try {
        keep_going = consume(a, b, std::move(node.mapped()));
      } catch (...) {
        lk.lock();
        if (!failure) failure = std::current_exception();
        cancel.store(true);
        cv.notify_all();
        break;
      }
      lk.lock();
      if (!keep_going) {
        cancel.store(true);
        cv.notify_all();
        break;
      }
    }
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace minsurf
