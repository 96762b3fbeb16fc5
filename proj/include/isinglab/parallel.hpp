#pragma once

#include <cstddef>
#include <functional>

namespace isinglab {

/// Worker count: ISING_LAB_THREADS when set and positive, otherwise the
/// hardware concurrency (ISING_LAB_THREADS=0 also means auto).
unsigned thread_count();

/// Calls body(i) for every i in [0, count). Indices are handed out
/// dynamically, so body must write only to slots owned by i; any reduction
/// happens afterwards in index order, which keeps results independent of the
/// number of threads. The first exception thrown by body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace isinglab
