#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cpomdp::stats {

inline double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

// Standard error of the mean (sample std / sqrt(n)); zero for n == 1.
inline double standard_error(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("standard_error: empty sample");
  if (xs.size() == 1) return 0.0;
  double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  double var = ss / static_cast<double>(xs.size() - 1);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// One-sided two-proportion z-test with pooled variance. Returns the p-value
// for the alternative "group 1's rate is lower than group 2's".
inline double two_proportion_p_value(long hits1, long n1, long hits2, long n2) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("two_proportion_p_value: empty group");
  if (hits1 < 0 || hits1 > n1 || hits2 < 0 || hits2 > n2)
    throw std::invalid_argument("two_proportion_p_value: hits out of range");
  double p1 = static_cast<double>(hits1) / static_cast<double>(n1);
  double p2 = static_cast<double>(hits2) / static_cast<double>(n2);
  double pooled = static_cast<double>(hits1 + hits2) / static_cast<double>(n1 + n2);
  double se = std::sqrt(pooled * (1.0 - pooled) *
                        (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
  if (se == 0.0) return p1 < p2 ? 0.0 : 1.0;
  return normal_cdf((p1 - p2) / se);
}

}  // namespace cpomdp::stats
