#include "binomix/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace binomix {
namespace {

unsigned initial_workers() {
  if (const char* env = std::getenv("BINOMIX_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<unsigned>& workers_slot() {
  static std::atomic<unsigned> slot{initial_workers()};
  return slot;
}

}  // namespace

unsigned default_workers() { return workers_slot().load(); }

void set_default_workers(unsigned workers) { workers_slot().store(std::max(1u, workers)); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned workers) {
  if (workers == 0) workers = default_workers();
  const std::size_t threads = std::min<std::size_t>(workers, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failure_index = count;
  std::mutex failure_mu;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        // Keep the lowest failing index so the reported error is stable.
        std::lock_guard lock(failure_mu);
        if (i < failure_index) {
          failure_index = i;
          failure = std::current_exception();
        }
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace binomix
