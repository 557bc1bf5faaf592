#ifndef LEGPRO_PARALLEL_HPP
#define LEGPRO_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace legpro {

/// Worker count for data-parallel loops. Results never depend on it: every
/// loop writes only to its own output slot.
struct Parallelism {
  unsigned threads = 1;

  static Parallelism hardware() {
    const unsigned n = std::thread::hardware_concurrency();
    return {n == 0 ? 1u : n};
  }
};

/// Runs fn(i) for i in [0, n), striped over the requested workers. The first
/// exception thrown by any worker is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t n, Parallelism par, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, par.threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace legpro

#endif  // LEGPRO_PARALLEL_HPP
