// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace precession {

/**
 * Runs f(i) for i in [begin, end) across a pool of threads. Work items must
 * be independent; results should be written to per-index slots so the outcome
 * does not depend on scheduling. threads == 0 picks the hardware count.
 */
template <class F>
void parallel_for(int begin, int end, F&& f, unsigned threads = 0) {
  if (end <= begin) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(end - begin));
  if (n <= 1) {
    for (int i = begin; i < end; ++i) f(i);
    return;
  }
  std::atomic<int> next(begin);
  std::atomic<bool> failed(false);
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const int i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= end) break;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace precession
