#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace episodic {

inline unsigned default_workers() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace detail {

/// Persistent pool executing one chunked job at a time. The caller thread
/// participates; chunk-to-thread assignment is unspecified, so anything that
/// must be deterministic writes into per-chunk slots.
class ThreadPool {
  struct Job {
    std::function<void(std::size_t)> fn;
    std::size_t total = 0;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
  };

 public:
  static ThreadPool& instance() {
    static ThreadPool pool;
    return pool;
  }

  void run(std::size_t chunk_count, std::function<void(std::size_t)> fn) {
    if (chunk_count == 0) return;
    // Re-entrant calls from inside a chunk run inline; the pool holds one job.
    if (chunk_count == 1 || threads_.empty() || in_chunk()) {
      bool was_in_chunk = in_chunk();
      in_chunk() = true;
      for (std::size_t i = 0; i < chunk_count; ++i) fn(i);
      in_chunk() = was_in_chunk;
      return;
    }
    auto job = std::make_shared<Job>();
    job->fn = std::move(fn);
    job->total = chunk_count;
    {
      std::lock_guard lock(mutex_);
      job_ = job;
      ++job_id_;
    }
    cv_.notify_all();
    work(*job);
    {
      std::unique_lock lock(mutex_);
      done_cv_.wait(lock, [&] { return job->done.load(std::memory_order_acquire) == job->total; });
      job_.reset();
    }
  }

  ~ThreadPool() {
    {
      std::lock_guard lock(mutex_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

 private:
  ThreadPool() {
    unsigned n = default_workers();
    for (unsigned i = 1; i < n; ++i) threads_.emplace_back([this] { worker_loop(); });
  }

  static bool& in_chunk() {
    thread_local bool flag = false;
    return flag;
  }

  void work(Job& job) {
    in_chunk() = true;
    for (;;) {
      std::size_t c = job.next.fetch_add(1, std::memory_order_relaxed);
      if (c >= job.total) break;
      job.fn(c);
      if (job.done.fetch_add(1, std::memory_order_acq_rel) + 1 == job.total) {
        std::lock_guard lock(mutex_);
        done_cv_.notify_all();
      }
    }
    in_chunk() = false;
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return stop_ || job_id_ != seen; });
        if (stop_) return;
        seen = job_id_;
        job = job_;
      }
      if (job) work(*job);
    }
  }

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  std::shared_ptr<Job> job_;
  std::uint64_t job_id_ = 0;
  bool stop_ = false;
};

}  // namespace detail

/// Number of chunks [0, n) splits into for a worker count; `grain` caps the
/// split so cheap per-item loops stay inline until they carry real work.
inline std::size_t chunk_count(std::size_t n, unsigned workers, std::size_t grain = 1) {
  if (n == 0) return 0;
  std::size_t cap = grain > 1 ? std::max<std::size_t>(1, n / grain) : n;
  return std::min({static_cast<std::size_t>(std::max(1u, workers)), n, cap});
}

/// Splits [0, n) into at most `workers` contiguous chunks and runs
/// body(chunk, begin, end) for each. Chunk boundaries depend only on n and the
/// chunk count, never on scheduling. Exceptions rethrow in chunk order.
template <class F>
void parallel_chunks(std::size_t n, unsigned workers, F&& body, std::size_t grain = 1) {
  if (n == 0) return;
  std::size_t chunks = chunk_count(n, workers, grain);
  if (chunks <= 1) {
    body(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  detail::ThreadPool::instance().run(chunks, [&](std::size_t c) {
    std::size_t begin = n * c / chunks;
    std::size_t end = n * (c + 1) / chunks;
    try {
      body(c, begin, end);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t sum = a + b;
  if (sum < a) throw std::overflow_error("exclusive_scan: accumulator overflow");
  return sum;
}

// Below this many elements the per-element loops run inline.
constexpr std::size_t kScanGrain = 2048;

}  // namespace detail

/// out[k] = sum of values[0..k). Bit-identical for every worker count.
inline std::vector<std::uint64_t> exclusive_scan(std::span<const std::uint64_t> values,
                                                 unsigned workers = 1) {
  std::vector<std::uint64_t> out(values.size());
  if (values.empty()) return out;
  std::size_t chunks = chunk_count(values.size(), workers, detail::kScanGrain);
  std::vector<std::uint64_t> sums(chunks, 0);
  parallel_chunks(
      values.size(), workers,
      [&](std::size_t c, std::size_t b, std::size_t e) {
        std::uint64_t acc = 0;
        for (std::size_t i = b; i < e; ++i) acc = detail::checked_add(acc, values[i]);
        sums[c] = acc;
      },
      detail::kScanGrain);
  std::uint64_t base = 0;
  for (auto& s : sums) {
    std::uint64_t next = detail::checked_add(base, s);
    s = base;
    base = next;
  }
  parallel_chunks(
      values.size(), workers,
      [&](std::size_t c, std::size_t b, std::size_t e) {
        std::uint64_t acc = sums[c];
        for (std::size_t i = b; i < e; ++i) {
          out[i] = acc;
          acc = detail::checked_add(acc, values[i]);
        }
      },
      detail::kScanGrain);
  return out;
}

/// Keeps exactly the items whose flag is nonzero, in stable order.
template <class T>
std::vector<T> compact_flags(std::span<const T> values, std::span<const std::uint8_t> flags,
                             unsigned workers = 1) {
  if (values.size() != flags.size())
    throw std::invalid_argument("compact_flags: values/flags length mismatch");
  std::vector<T> out;
  if (values.empty()) return out;
  std::size_t chunks = chunk_count(values.size(), workers, detail::kScanGrain);
  std::vector<std::size_t> counts(chunks, 0);
  parallel_chunks(
      values.size(), workers,
      [&](std::size_t c, std::size_t b, std::size_t e) {
        std::size_t k = 0;
        for (std::size_t i = b; i < e; ++i) k += flags[i] != 0;
        counts[c] = k;
      },
      detail::kScanGrain);
  std::size_t total = 0;
  for (auto& c : counts) {
    std::size_t next = total + c;
    c = total;
    total = next;
  }
  out.resize(total);
  parallel_chunks(
      values.size(), workers,
      [&](std::size_t c, std::size_t b, std::size_t e) {
        std::size_t at = counts[c];
        for (std::size_t i = b; i < e; ++i)
          if (flags[i] != 0) out[at++] = values[i];
      },
      detail::kScanGrain);
  return out;
}

/// Concatenation of per_item(inputs[i], sink) outputs in input order,
/// identical for any worker count. per_item must be pure; the first per-item
/// failure (by input order) propagates.
template <class Out, class In, class F>
std::vector<Out> parallel_map_collect(std::span<const In> inputs, F&& per_item,
                                      unsigned workers = 1) {
  std::vector<Out> out;
  if (inputs.empty()) return out;
  std::size_t chunks = std::min<std::size_t>(std::max(1u, workers), inputs.size());
  std::vector<std::vector<Out>> locals(chunks);
  parallel_chunks(inputs.size(), workers, [&](std::size_t c, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) per_item(inputs[i], locals[c]);
  });
  std::size_t total = 0;
  for (const auto& l : locals) total += l.size();
  out.reserve(total);
  for (auto& l : locals) out.insert(out.end(), l.begin(), l.end());
  return out;
}

}  // namespace episodic
