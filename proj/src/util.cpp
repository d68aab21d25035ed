#include "rfs/util.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>

namespace rfs {

namespace {
std::atomic<unsigned> g_thread_cap{0};
}

void set_thread_cap(unsigned threads) { g_thread_cap.store(threads); }

unsigned thread_cap() {
  unsigned cap = g_thread_cap.load();
  if (cap == 0) cap = std::thread::hardware_concurrency();
  if (cap == 0) cap = 1;
  return cap;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::min<std::size_t>(thread_cap(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

double loglog_trend_slope(const std::vector<std::pair<std::uint64_t, double>>& profile) {
  std::vector<double> xs, ys;
  const std::size_t start = profile.size() / 2;
  for (std::size_t i = start; i < profile.size(); ++i) {
    const double v = profile[i].second;
    if (profile[i].first == 0) continue;
    xs.push_back(std::log(static_cast<double>(profile[i].first)));
    // Floors zero sups; a profile that hits exactly 0 is simply decreasing.
    ys.push_back(std::log(std::max(v, 1e-300)));
  }
  return regression_slope(xs, ys);
}

}  // namespace rfs
