#pragma once

#include <cstddef>
#include <functional>

namespace dancer {

// Runs fn(index, worker) for every index in [0, n). Indices are handed out
// dynamically; results must go into per-index slots for determinism. Runs
// inline when workers <= 1.
void parallel_for_indexed(std::size_t n, std::size_t workers,
                          const std::function<void(std::size_t index, std::size_t worker)>& fn);

}  // namespace dancer
