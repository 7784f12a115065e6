#pragma once

// Trial-level parallelism. Work items write results by index, so the output
// is bit-identical for any worker count; SPECSHIFT_THREADS caps the pool.

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace specshift {

inline int thread_cap() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("SPECSHIFT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < hw) hw = cap;
    if (cap >= 1 && cap >= hw) hw = cap;
  }
  return hw;
}

// fn(i) for i in [0, count); each call must be independent of the others.
inline void parallel_for_index(long count, const std::function<void(long)>& fn) {
  const int workers = std::min<long>(thread_cap(), count) > 0
                          ? static_cast<int>(std::min<long>(thread_cap(), count))
                          : 1;
  if (workers <= 1 || count <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (long i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace specshift
