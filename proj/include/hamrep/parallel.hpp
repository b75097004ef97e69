#pragma once

#include <cstddef>
#include <functional>

namespace hamrep {

// Worker count: HAMREP_THREADS when set to a positive integer, else the hardware count.
unsigned worker_count();

// Runs fn(0..n-1) on up to worker_count() threads. Callers write results into
// per-index slots, so output does not depend on scheduling. The first exception
// thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hamrep
