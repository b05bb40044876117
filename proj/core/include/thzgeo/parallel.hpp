#pragma once

#include <cstddef>
#include <functional>

namespace thzgeo {

/// Worker count: THZGEO_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Calls body(begin, end) on disjoint chunks covering [0, n), using up to
/// worker_count() threads. Nested calls from inside a worker run serially.
/// The first exception thrown by any chunk is rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Sum of values in index order by pairwise recursion; the result depends only
/// on the values, not on how they were produced.
double pairwise_sum(const double* values, std::size_t n);

}  // namespace thzgeo
