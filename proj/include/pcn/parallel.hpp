#pragma once

#include <cstddef>
#include <functional>

namespace pcn {

// Worker count: PCN_THREADS when set, else hardware concurrency.
std::size_t worker_count();

// Runs body(chunk) for chunk in [0, chunks). Chunks are distributed over worker
// threads; nested calls from inside a worker run inline. Callers reduce per-chunk
// results in chunk order, which keeps results independent of the thread count.
void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body);

// Splits [0, n) into `chunks` contiguous ranges; returns [begin, end) of `chunk`.
struct Range {
  std::size_t begin;
  std::size_t end;
};
Range chunk_range(std::size_t n, std::size_t chunks, std::size_t chunk);

}  // namespace pcn
