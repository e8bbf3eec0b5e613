#include "acthull/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace acthull {

namespace {

unsigned default_threads() {
  if (const char* env = std::getenv("ACTHULL_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<unsigned> g_override{0};

}  // namespace

unsigned thread_count() {
  const unsigned forced = g_override.load();
  if (forced > 0) return forced;
  static const unsigned fallback = default_threads();
  return fallback;
}

void set_thread_count(unsigned n) { g_override.store(n); }

void parallel_for(Index n, const std::function<void(Index)>& body) {
  if (n == 0) return;
  const Index workers = std::min<Index>(thread_count(), n);
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<bool> stop{false};
  const Index block = (n + workers - 1) / workers;
  auto run = [&](Index lo, Index hi) {
    try {
      for (Index i = lo; i < hi && !stop.load(std::memory_order_relaxed); ++i) body(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      stop.store(true);
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (Index w = 1; w < workers; ++w) {
    const Index lo = w * block;
    const Index hi = std::min(n, lo + block);
    if (lo < hi) pool.emplace_back(run, lo, hi);
  }
  run(0, std::min(n, block));
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace acthull
