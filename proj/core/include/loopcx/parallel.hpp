#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace loopcx {

// Worker count: LOOPCX_THREADS if set (clamped to [1, 256]), else
// hardware concurrency, else 1.
int thread_count();

// Runs fn(begin, end) over a chunked partition of [0, n). Chunk boundaries
// depend only on n and the worker count, never on timing.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

// Fixed-tree pairwise summation. The reduction tree depends only on the
// length, so results are bit-identical run to run and thread count to
// thread count, provided the slots hold identical values.
double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

}  // namespace loopcx
