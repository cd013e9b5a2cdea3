#include "wgf/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace wgf {

int worker_count() {
  static const int n = [] {
    const char* env = std::getenv("WGF_NUM_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v > 0 ? v : 1;
  }();
  return n;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  parallel_for(n, fn, worker_count());
}

void parallel_for(int n, const std::function<void(int)>& fn, int workers) {
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace wgf
