#pragma once

#include <cstddef>
#include <functional>

namespace usim {

// Runs `fn(begin, end, worker_index)` over contiguous chunks of [0, n).
// Callers keep per-worker accumulators and merge them in worker-index order,
// which keeps floating-point reductions deterministic for a fixed job count.
void parallel_chunks(std::size_t n, int jobs,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Number of workers parallel_chunks will actually use.
std::size_t chunk_count(std::size_t n, int jobs);

}  // namespace usim
