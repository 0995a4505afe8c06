#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tailrisk {

/// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) noexcept {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& other) noexcept {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double n1 = static_cast<double>(count);
    const double n2 = static_cast<double>(other.count);
    const double delta = other.mean - mean;
    const double total = n1 + n2;
    mean += delta * n2 / total;
    m2 += other.m2 + delta * delta * n1 * n2 / total;
    count += other.count;
  }

  /// Sample variance (denominator count - 1); zero for fewer than two points.
  double variance() const noexcept {
    return count > 1 ? std::max(0.0, m2 / static_cast<double>(count - 1)) : 0.0;
  }

  double std_error() const noexcept {
    return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

/// Worker count from TAILRISK_THREADS, else hardware concurrency (min 1).
unsigned default_worker_count();

namespace detail {
inline thread_local bool in_parallel_region = false;

inline unsigned resolve_workers(unsigned requested, std::uint64_t tasks) {
  if (in_parallel_region) return 1;
  unsigned w = requested == 0 ? default_worker_count() : requested;
  return static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(w, tasks)));
}
}  // namespace detail

/// Runs fn(i) for i in [0, count) over a worker pool. Work is handed out by
/// index, so any per-index output the caller writes is independent of the
/// worker count. Nested calls from inside a worker run serially.
template <class Fn>
void parallel_for(std::uint64_t count, unsigned workers, Fn&& fn) {
  const unsigned w = detail::resolve_workers(workers, count);
  if (w <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    detail::in_parallel_region = true;
    for (;;) {
      const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(count);
      }
    }
    detail::in_parallel_region = false;
  };
  std::vector<std::thread> pool;
  pool.reserve(w - 1);
  for (unsigned t = 1; t < w; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline constexpr std::uint64_t kReplicateBlock = 4096;

/// Accumulates fn(j) for j in [0, replications). Replicates are grouped in
/// fixed-size blocks that are merged in block order, so the result is
/// bit-identical for every worker count.
template <class Fn>
RunningStats replicate_stats(std::uint64_t replications, unsigned workers, Fn&& fn) {
  const std::uint64_t blocks = (replications + kReplicateBlock - 1) / kReplicateBlock;
  std::vector<RunningStats> partial(blocks);
  parallel_for(blocks, workers, [&](std::uint64_t b) {
    const std::uint64_t begin = b * kReplicateBlock;
    const std::uint64_t end = std::min(replications, begin + kReplicateBlock);
    RunningStats s;
    for (std::uint64_t j = begin; j < end; ++j) s.push(fn(j));
    partial[b] = s;
  });
  RunningStats total;
  for (const auto& s : partial) total.merge(s);
  return total;
}

}  // namespace tailrisk
