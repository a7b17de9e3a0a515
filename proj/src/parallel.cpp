#include "pcn/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace pcn {

namespace {
thread_local bool in_worker = false;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("PCN_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n > 0) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), chunks);
  if (in_worker || workers <= 1) {
    for (std::size_t i = 0; i < chunks; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    in_worker = true;
    for (std::size_t i = next++; i < chunks; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
    in_worker = false;
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
  }
  if (failure) std::rethrow_exception(failure);
}

Range chunk_range(std::size_t n, std::size_t chunks, std::size_t chunk) {
  return {n * chunk / chunks, n * (chunk + 1) / chunks};
}

}  // namespace pcn
