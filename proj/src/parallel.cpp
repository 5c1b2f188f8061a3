#include "fvbem/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace fvbem {

namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int threads) {
  if (threads < 1) throw std::invalid_argument("thread count must be at least 1");
  g_threads = threads;
}

int num_threads() { return g_threads; }

void parallel_for(int n, const std::function<void(int)>& body) {
  const int workers = std::min(g_threads.load(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fvbem
