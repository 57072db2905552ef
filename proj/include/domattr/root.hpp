#pragma once

#include <numeric>
#include <string>

#include "domattr/error.hpp"

namespace domattr {

/// Bisects a bracket [lo, hi] on which `above(x)` is true at lo and false at
/// hi, down to adjacent doubles. Returns the midpoint of the final bracket.
template <class Pred>
double bisect(Pred&& above, double lo, double hi) {
  for (int iter = 0; iter < 2100; ++iter) {
    const double mid = std::midpoint(lo, hi);
    if (mid <= lo || mid >= hi) break;
    (above(mid) ? lo : hi) = mid;
  }
  return std::midpoint(lo, hi);
}

/// Root of g(x) = level for a nonincreasing g on (0, inf). The bracket grows
/// from x = 1 by doubling (or halving) until the sign changes.
template <class G>
double solve_decreasing(G&& g, double level, const std::string& what) {
  const auto above = [&](double x) { return g(x) >= level; };
  double x = 1.0;
  if (above(x)) {
    for (int k = 0; k < 1023; ++k) {
      const double next = 2.0 * x;
      if (!above(next)) return bisect(above, x, next);
      x = next;
    }
    fail(ErrorCategory::no_root, what + ": bracket expansion overflowed");
  }
  for (int k = 0; k < 1022; ++k) {
    const double next = 0.5 * x;
    if (above(next)) return bisect(above, next, x);
    x = next;
  }
  fail(ErrorCategory::no_root, what + ": no sign change in the admissible range");
}

/// Root of g(x) = level for a g that rises from below the level, crosses it,
/// and then decreases towards 0 (the shape of n V(x) / x^2). Scans upward by
/// doubling from 2^-32 to the first point at or above the level, then on to
/// the first point below it, and bisects that bracket.
template <class G>
double solve_downcrossing(G&& g, double level, const std::string& what) {
  const auto above = [&](double x) { return g(x) >= level; };
  double x = 0x1.0p-32;
  bool seen_above = false;
  for (int k = 0; k < 1055; ++k) {
    const bool is_above = above(x);
    if (seen_above && !is_above) return bisect(above, 0.5 * x, x);
    seen_above = seen_above || is_above;
    x *= 2.0;
  }
  fail(ErrorCategory::no_root, what + (seen_above ? ": bracket expansion overflowed"
                                                  : ": the level is never reached"));
}

}  // namespace domattr
