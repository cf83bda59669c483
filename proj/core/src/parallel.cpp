#include "novikov/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace novikov {

int worker_count() {
  static const int count = [] {
    const char* env = std::getenv("NOVIKOV_THREADS");
    if (!env) return 1;
    const int parsed = std::atoi(env);
    if (parsed < 1) return 1;
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    return hw > 0 ? std::min(parsed, hw) : parsed;
  }();
  return count;
}

void parallel_for(int begin, int end, const std::function<void(int)>& body) {
  const int count = end - begin;
  const int workers = std::min(worker_count(), count);
  if (workers <= 1 || count <= 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  std::atomic<int> next{begin};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (int i = next.fetch_add(1); i < end; i = next.fetch_add(1)) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(end);  // drain remaining work
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace novikov
