#pragma once

#include <cstddef>
#include <functional>

namespace newsmech {

// Worker count: NEWSMECH_THREADS if set and positive, else hardware concurrency.
int default_thread_count();

// Runs fn(i) for i in [0, n). Results must be written to disjoint slots, so the
// outcome does not depend on the schedule. Rethrows the first exception by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads);

}  // namespace newsmech
