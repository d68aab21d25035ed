#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

namespace rfs {

// Worker cap for grid scans; 0 means hardware concurrency. Set once by the
// CLI before dispatch.
void set_thread_cap(unsigned threads);
unsigned thread_cap();

// Static block partition of [0, count); each index is processed exactly once
// by exactly one worker, so results are independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y);

// Log-log slope over the last half of a (positive) profile; the trend rule
// shared by the hypothesis checkers and the Cauchy diagnostic:
// slope < -0.1 decreasing, slope > +0.1 growing.
double loglog_trend_slope(const std::vector<std::pair<std::uint64_t, double>>& profile);

}  // namespace rfs
