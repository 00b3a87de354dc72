#include "pam/parallel.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace pam {

int resolve_workers(int requested, int count) {
  int w = requested;
  if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
  if (w < 1) w = 1;
  if (w > count) w = count;
  return w;
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  workers = resolve_workers(workers, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace pam
