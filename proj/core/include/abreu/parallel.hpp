#pragma once

#include <cstddef>
#include <functional>

namespace abreu {

// Process-wide worker count for node-wise loops. 1 means run inline.
void set_thread_count(int threads);
int thread_count() noexcept;

// Runs body(begin, end) over disjoint chunks of [0, n). Each index is visited
// exactly once, so loops that only write slot i are deterministic regardless
// of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace abreu
