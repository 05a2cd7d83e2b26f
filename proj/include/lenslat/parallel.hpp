#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace lenslat {

/// Worker count from CM_THREADS, else hardware concurrency (at least 1).
inline unsigned default_threads() {
  if (const char* env = std::getenv("CM_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Exceptions are
/// rethrown on the calling thread (the one with the lowest index wins).
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::optional<std::size_t> err_index;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!err_index || i < *err_index) {
            err_index = i;
            err = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

/// Smallest i in [0, n) with pred(i) true, evaluated in parallel. Indices
/// above the best hit so far are skipped, so the answer (and the number of
/// indices that had to be examined) does not depend on scheduling.
template <class Pred>
std::optional<std::size_t> parallel_find_first(std::size_t n, unsigned threads, Pred&& pred) {
  std::atomic<std::size_t> best{n};
  parallel_for(n, threads, [&](std::size_t i) {
    if (i >= best.load()) return;
    if (pred(i)) {
      std::size_t cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
    }
  });
  if (best.load() == n) return std::nullopt;
  return best.load();
}

}  // namespace lenslat
