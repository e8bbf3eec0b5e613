#pragma once

#include "acthull/point_set.hpp"

#include <functional>

namespace acthull {

/// Worker count used by parallel_for. Starts from ACTHULL_THREADS when set,
/// else the hardware concurrency.
unsigned thread_count();
/// Overrides the worker count for the whole process; 0 restores the default.
void set_thread_count(unsigned n);

/// Calls body(i) for i in [0, n) on up to thread_count() threads. Indices are
/// handed out in contiguous blocks, so callers that write only slot i get
/// results independent of the thread count. The first exception thrown by
/// any body is rethrown after all workers stop.
void parallel_for(Index n, const std::function<void(Index)>& body);

}  // namespace acthull
