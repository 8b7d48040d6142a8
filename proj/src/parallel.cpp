#include "aclab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace aclab::parallel {

namespace {

// Persistent pool. One job at a time; workers and the caller pull block
// indices from a shared counter.
class Pool {
 public:
  explicit Pool(unsigned workers) {
    for (unsigned k = 0; k < workers; ++k) threads_.emplace_back([this] { worker_loop(); });
  }

  ~Pool() {
    {
      std::lock_guard lock(mutex_);
      stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
  }

  void run(std::size_t nblocks, const std::function<void(std::size_t)>& task) {
    std::unique_lock submit(submit_mutex_);
    {
      std::lock_guard lock(mutex_);
      task_ = &task;
      nblocks_ = nblocks;
      next_.store(0);
      pending_ = threads_.size();
      ++generation_;
    }
    wake_.notify_all();
    drain();
    std::unique_lock lock(mutex_);
    done_.wait(lock, [this] { return pending_ == 0; });
    task_ = nullptr;
  }

 private:
  void drain() {
    for (;;) {
      const std::size_t b = next_.fetch_add(1);
      if (b >= nblocks_) return;
      (*task_)(b);
    }
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      {
        std::unique_lock lock(mutex_);
        wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
      }
      drain();
      {
        std::lock_guard lock(mutex_);
        --pending_;
      }
      done_.notify_all();
    }
  }

  std::vector<std::thread> threads_;
  std::mutex submit_mutex_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t nblocks_ = 0;
  std::atomic<std::size_t> next_{0};
  std::size_t pending_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

std::mutex g_config_mutex;
unsigned g_threads = 1;
std::shared_ptr<Pool> g_pool;

std::shared_ptr<Pool> pool() {
  std::lock_guard lock(g_config_mutex);
  return g_pool;
}

std::size_t block_count(std::size_t begin, std::size_t end) {
  return end > begin ? (end - begin + kBlockSize - 1) / kBlockSize : 0;
}

void run_blocks(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& task) {
  const std::size_t nblocks = block_count(begin, end);
  auto p = nblocks > 1 ? pool() : nullptr;
  if (!p) {
    for (std::size_t b = 0; b < nblocks; ++b) task(b);
    return;
  }
  p->run(nblocks, task);
}

}  // namespace

void set_thread_count(unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::lock_guard lock(g_config_mutex);
  if (threads == g_threads) return;
  g_threads = threads;
  g_pool = threads > 1 ? std::make_shared<Pool>(threads - 1) : nullptr;
}

unsigned thread_count() {
  std::lock_guard lock(g_config_mutex);
  return g_threads;
}

void for_blocks(std::size_t begin, std::size_t end, const std::function<void(std::size_t, std::size_t)>& fn) {
  run_blocks(begin, end, [&](std::size_t b) {
    const std::size_t lo = begin + b * kBlockSize;
    fn(lo, std::min(end, lo + kBlockSize));
  });
}

double sum_blocks(std::size_t begin, std::size_t end, const std::function<double(std::size_t, std::size_t)>& fn) {
  std::vector<double> partial(block_count(begin, end), 0.0);
  run_blocks(begin, end, [&](std::size_t b) {
    const std::size_t lo = begin + b * kBlockSize;
    partial[b] = fn(lo, std::min(end, lo + kBlockSize));
  });
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

double max_blocks(std::size_t begin, std::size_t end, const std::function<double(std::size_t, std::size_t)>& fn) {
  std::vector<double> partial(block_count(begin, end), -std::numeric_limits<double>::infinity());
  run_blocks(begin, end, [&](std::size_t b) {
    const std::size_t lo = begin + b * kBlockSize;
    partial[b] = fn(lo, std::min(end, lo + kBlockSize));
  });
  double m = -std::numeric_limits<double>::infinity();
  for (double v : partial) m = std::max(m, v);
  return m;
}

}  // namespace aclab::parallel
