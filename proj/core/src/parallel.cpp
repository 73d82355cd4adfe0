#include "abreu/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace abreu {
namespace {
std::atomic<int> g_threads{1};
constexpr std::size_t kMinChunk = 512;
}  // namespace

void set_thread_count(int threads) { g_threads.store(std::max(1, threads)); }

int thread_count() noexcept { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(thread_count());
  if (workers <= 1 || n < 2 * kMinChunk) {
    body(0, n);
    return;
  }
  const std::size_t chunks = std::min(workers, n / kMinChunk);
  const std::size_t step = (n + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  pool.reserve(chunks - 1);
  for (std::size_t c = 1; c < chunks; ++c) {
    const std::size_t begin = c * step;
    const std::size_t end = std::min(n, begin + step);
    if (begin < end) pool.emplace_back(body, begin, end);
  }
  body(0, std::min(n, step));
  for (auto& t : pool) t.join();
}

}  // namespace abreu
