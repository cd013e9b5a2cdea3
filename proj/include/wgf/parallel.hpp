#pragma once

#include <functional>

namespace wgf {

/// Worker count for the prox sweep; read once from WGF_NUM_THREADS (default 1).
int worker_count();

/// Runs fn(0..n-1) over a fixed static partition. Iterations must be
/// independent; the result does not depend on the worker count.
void parallel_for(int n, const std::function<void(int)>& fn);
void parallel_for(int n, const std::function<void(int)>& fn, int workers);

}  // namespace wgf
