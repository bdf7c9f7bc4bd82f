#pragma once

#include <cstddef>
#include <functional>

namespace usc_rabi {

/// Worker count: USC_RABI_THREADS when set (positive integer, else
/// ValidationError), otherwise the hardware concurrency.
int thread_count();

/// Runs fn(0..n-1) on up to `threads` workers (0 = thread_count()). Work is
/// split by index, so results written to fn's own slot are deterministic.
/// The first exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

}  // namespace usc_rabi
