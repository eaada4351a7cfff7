#include "tul/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace tul {
namespace {

std::size_t default_threads() {
  if (const char* env = std::getenv("TUL_THREADS")) {
    long v = std::atol(env);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return std::clamp<std::size_t>(hw == 0 ? 1 : hw, 1, 8);
}

std::size_t& thread_count_ref() {
  static std::size_t n = default_threads();
  return n;
}

// Persistent pool; workers sleep between jobs. Lazily started, sized to
// thread_count()-1 (the caller participates).
class Pool {
 public:
  static Pool& instance() {
    static Pool p;
    return p;
  }

  void run(std::size_t nchunks, std::size_t total,
           const std::function<void(std::size_t, std::size_t)>& fn) {
    ensure_workers(nchunks - 1);
    {
      std::lock_guard<std::mutex> lk(mu_);
      fn_ = &fn;
      total_ = total;
      nchunks_ = nchunks;
      next_chunk_.store(0, std::memory_order_relaxed);
      pending_ = nchunks;
      ++generation_;
    }
    cv_work_.notify_all();
    work_loop(); // caller participates
    std::unique_lock<std::mutex> lk(mu_);
    cv_done_.wait(lk, [&] { return pending_ == 0; });
    fn_ = nullptr;
  }

 private:
  Pool() = default;
  ~Pool() {
    {
      std::lock_guard<std::mutex> lk(mu_);
      stop_ = true;
    }
    cv_work_.notify_all();
    for (auto& t : workers_) t.join();
  }

  void ensure_workers(std::size_t want) {
    while (workers_.size() < want)
      workers_.emplace_back([this] { worker_main(); });
  }

  void chunk_bounds(std::size_t c, std::size_t& b, std::size_t& e) const {
    std::size_t per = total_ / nchunks_, rem = total_ % nchunks_;
    b = c * per + std::min(c, rem);
    e = b + per + (c < rem ? 1 : 0);
  }

  void work_loop() {
    for (;;) {
      std::size_t c = next_chunk_.fetch_add(1, std::memory_order_relaxed);
      if (c >= nchunks_) return;
      std::size_t b, e;
      chunk_bounds(c, b, e);
      if (b < e) (*fn_)(b, e);
      std::lock_guard<std::mutex> lk(mu_);
      if (--pending_ == 0) cv_done_.notify_all();
    }
  }

  void worker_main() {
    std::uint64_t seen = 0;
    for (;;) {
      {
        std::unique_lock<std::mutex> lk(mu_);
        cv_work_.wait(lk, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
      }
      work_loop();
    }
  }

  std::mutex mu_;
  std::condition_variable cv_work_, cv_done_;
  std::vector<std::thread> workers_;
  const std::function<void(std::size_t, std::size_t)>* fn_ = nullptr;
  std::size_t total_ = 0, nchunks_ = 0, pending_ = 0;
  std::atomic<std::size_t> next_chunk_{0};
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

} // namespace

std::size_t thread_count() { return thread_count_ref(); }

void set_thread_count(std::size_t n) { thread_count_ref() = n == 0 ? default_threads() : n; }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t nt = std::min(thread_count(), n);
  if (nt <= 1) {
    fn(0, n);
    return;
  }
  Pool::instance().run(nt, n, fn);
}

} // namespace tul
