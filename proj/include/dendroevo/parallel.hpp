#pragma once

#include <functional>

namespace dendroevo {

// Effective worker count: `requested` if positive, else hardware
// concurrency, in both cases capped by the DENDRO_EVO_THREADS env var.
int worker_count(int requested = 0);

// Runs fn(0..n-1) on a bounded pool. Tasks must write to disjoint,
// index-addressed slots so results are independent of scheduling; the
// first exception thrown by a task is rethrown after the pool drains.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace dendroevo
