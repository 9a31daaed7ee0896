#ifndef ROUGH_INTERNAL_UTIL_HPP
#define ROUGH_INTERNAL_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rough::detail {

// Neumaier-compensated accumulator; keeps long grid sums accurate to a few
// ulps regardless of term count or cancellation pattern.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }

  double value() const { return sum + carry; }
};

// Runs body(lo, hi) over a partition of [0, n).  Each block writes disjoint
// output, so results are bitwise identical for any worker count; on a
// single-core host this degenerates to one direct call.  The first exception
// raised by any worker is rethrown on the calling thread.
inline void parallel_for_blocks(int n, const std::function<void(int, int)>& body) {
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers = static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw, 8));
  if (workers <= 1 || n < 4 * workers) {
    body(0, n);
    return;
  }
  std::mutex error_mutex;
  std::exception_ptr error;
  const auto guarded = [&](int lo, int hi) {
    try {
      body(lo, hi);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(guarded, lo, hi);
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Fixed 12-significant-digit rendering shared by every text exporter, so
// identical invocations produce byte-identical files.
inline std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace rough::detail

#endif
