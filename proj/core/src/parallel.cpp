#include "dancer/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace dancer {

void parallel_for_indexed(std::size_t n, std::size_t workers,
                          const std::function<void(std::size_t, std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  const std::size_t spawn = std::min(workers, n);
  threads.reserve(spawn);
  for (std::size_t w = 0; w < spawn; ++w) {
    threads.emplace_back([&, w] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        fn(i, w);
      }
    });
  }
  for (auto& th : threads) th.join();
}

}  // namespace dancer
