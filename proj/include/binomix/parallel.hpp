#pragma once

#include <cstddef>
#include <functional>

namespace binomix {

/// Number of worker threads used by parallel_for when a call passes 0.
/// Defaults to std::thread::hardware_concurrency(); BINOMIX_WORKERS overrides.
unsigned default_workers();
void set_default_workers(unsigned workers);

/// Runs body(i) for i in [0, count) on up to `workers` threads (0 = default).
/// Bodies must write only to their own output slots; any exception thrown by a
/// body is rethrown on the calling thread after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned workers = 0);

}  // namespace binomix
