// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_PARALLEL_HPP
#define SCATTERFM_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace scatterfm
{

// Worker count: SCATTERFM_THREADS if set and positive, otherwise hardware concurrency.
inline unsigned worker_count()
{
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("SCATTERFM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<unsigned>(v);
    } catch (...) {
      // unparsable: fall back to auto
    }
  }
  return hw;
}

// Runs body(i) for i in [0, count). Each index is handled by exactly one worker, so results
// written per index do not depend on the thread count. The first exception is rethrown.
template <typename Body>
void parallel_for(std::size_t count, Body &&body)
{
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count)
          return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error)
            error = std::current_exception();
          next.store(count);
        }
      }
    });
  for (auto &t : pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
}

}  // namespace scatterfm

#endif  // SCATTERFM_PARALLEL_HPP
