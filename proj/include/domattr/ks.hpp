#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "domattr/error.hpp"

namespace domattr {

/// sup_x |F_a(x) - F_b(x)| over the two empirical cdfs. Ties are stepped over
/// together so equal values never create a spurious gap.
inline double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), "ks_two_sample: samples must be nonempty");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = x.size(), m = y.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / n - j / m));
  }
  return d;
}

/// Asymptotic critical value of the two-sample statistic at significance `level`:
/// sqrt(-log(level/2)/2) sqrt((n + m)/(n m)); 1.6276 sqrt(...) at 1%.
inline double ks_critical(std::size_t n, std::size_t m, double level = 0.01) {
  require(n > 0 && m > 0, "ks_critical: sizes must be positive");
  require(level > 0.0 && level < 1.0, "ks_critical: level must lie in (0, 1)");
  const double c = std::sqrt(-0.5 * std::log(0.5 * level));
  return c * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * static_cast<double>(m)));
}

/// Nearest-rank quantile of a sorted sample: the ceil(p N)-th smallest value.
inline double nearest_rank(std::span<const double> sorted, double p) {
  require(!sorted.empty(), "nearest_rank: sample must be nonempty");
  require(p > 0.0 && p <= 1.0, "nearest_rank: p must lie in (0, 1]");
  // The shrink keeps p N = 95.00000000000001 (from 0.95 * 100) at rank 95.
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size()) * (1.0 - 1e-12)));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

}  // namespace domattr
