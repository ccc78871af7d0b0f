#include "usim/common/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace usim {

std::size_t chunk_count(std::size_t n, int jobs) {
  if (n == 0) return 0;
  const std::size_t workers = jobs <= 1 ? 1 : static_cast<std::size_t>(jobs);
  return std::min(workers, n);
}

void parallel_chunks(std::size_t n, int jobs,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  const std::size_t workers = chunk_count(n, jobs);
  if (workers == 0) return;
  if (workers == 1) {
    fn(0, n, 0);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    threads.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
  }
  for (std::thread& t : threads) t.join();
}

}  // namespace usim
