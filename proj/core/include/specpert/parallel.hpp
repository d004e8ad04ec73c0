#pragma once

#include <cstddef>
#include <functional>

namespace specpert {

/// Upper bound on worker threads used by grid and sweep loops.
///
/// Defaults to the SPECPERT_MAX_WORKERS environment variable when set,
/// otherwise std::thread::hardware_concurrency(). Results never depend on it.
std::size_t worker_limit();

/// Overrides the worker limit for the rest of the process (0 restores the
/// default).
void set_worker_limit(std::size_t workers);

/// Calls body(i) for every i in [0, count). Items are handed out in
/// contiguous blocks; body must only write to storage owned by item i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace specpert
