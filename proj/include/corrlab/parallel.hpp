// Deterministic data-parallel helpers.
//
// Work is cut into chunks whose boundaries depend only on the problem size,
// never on the worker count, and partial results are combined in chunk order.
// Floating-point reductions are therefore bit-identical for any number of
// threads.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace corrlab {

namespace detail {
inline std::atomic<unsigned>& worker_count_slot() {
  static std::atomic<unsigned> slot{0};
  return slot;
}
}  // namespace detail

/// Number of worker threads. CORRLAB_THREADS overrides the default of 1
/// unless set_worker_count() was called explicitly.
inline unsigned worker_count() {
  unsigned n = detail::worker_count_slot().load();
  if (n != 0) return n;
  if (const char* env = std::getenv("CORRLAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  return 1;
}

inline void set_worker_count(unsigned n) { detail::worker_count_slot() = n; }

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  CompensatedSum& operator+=(const CompensatedSum& o) {
    add(o.sum_);
    add(o.comp_);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Runs body(chunk_begin, chunk_end) over fixed-size chunks of [begin, end)
/// and returns the per-chunk results in order.
template <class Result, class Body>
std::vector<Result> parallel_chunks(std::size_t begin, std::size_t end,
                                    std::size_t chunk, Body&& body) {
  if (end <= begin) return {};
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t nchunks = (end - begin + chunk - 1) / chunk;
  std::vector<Result> out(nchunks);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(), nchunks));
  auto run = [&](std::size_t c) {
    std::size_t lo = begin + c * chunk;
    std::size_t hi = std::min(end, lo + chunk);
    out[c] = body(lo, hi);
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) run(c);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < nchunks; c = next++) run(c);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

/// Ordered reduction over fixed chunks.
template <class Result, class Body, class Combine>
Result parallel_reduce(std::size_t begin, std::size_t end, std::size_t chunk,
                       Result init, Body&& body, Combine&& combine) {
  auto parts = parallel_chunks<Result>(begin, end, chunk, body);
  for (auto& p : parts) init = combine(std::move(init), std::move(p));
  return init;
}

}  // namespace corrlab
