#pragma once

#include <cstddef>
#include <functional>

namespace minlap {

/// Worker count: MINLAP_THREADS when set and positive, else the hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads using static
/// contiguous chunks. Callers write per-index results and reduce them in index
/// order, so sums do not depend on the number of workers.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace minlap
