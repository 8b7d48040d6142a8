#pragma once

#include <cstddef>
#include <functional>

namespace aclab::parallel {

// Work is cut into blocks of this many indices regardless of the thread
// count, and block results are combined in block order, so every reduction
// is bitwise identical for any number of threads.
inline constexpr std::size_t kBlockSize = 16384;

void set_thread_count(unsigned threads);  // 0 means hardware concurrency
unsigned thread_count();

// fn(begin, end) over the blocks of [begin, end).
void for_blocks(std::size_t begin, std::size_t end, const std::function<void(std::size_t, std::size_t)>& fn);

// Sum of fn(begin, end) over the blocks, accumulated in block order.
double sum_blocks(std::size_t begin, std::size_t end, const std::function<double(std::size_t, std::size_t)>& fn);

// Max of fn(begin, end) over the blocks; -inf for an empty range.
double max_blocks(std::size_t begin, std::size_t end, const std::function<double(std::size_t, std::size_t)>& fn);

}  // namespace aclab::parallel
