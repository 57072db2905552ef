#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace domattr {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  /// Pieces whose error estimate falls below this are accepted as converged.
  double abs_floor = 1e-14;
  unsigned max_depth = 18;
};

namespace detail {

/// Piece boundaries for [a, b]: the caller's breakpoints plus powers of 16, so
/// that no single piece spans more than a factor 16 in scale. Integrands here
/// are power laws over many decades, which adaptive rules handle best in
/// geometrically sized pieces.
inline std::vector<double> quadrature_cuts(double a, double b, std::span<const double> breaks) {
  std::vector<double> cuts{a};
  for (double p : breaks)
    if (p > a && p < b) cuts.push_back(p);
  for (int k = -8; k <= 255; ++k) {
    const double p = std::ldexp(1.0, 4 * k);
    if (p >= b) break;
    if (p > a) cuts.push_back(p);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(b);
  return cuts;
}

}  // namespace detail

/// Adaptive 31-point Gauss-Kronrod integral of f over [a, b]; b may be +inf.
/// `breaks` lists interior points where f (or a derivative) jumps.
template <class F>
double integrate(F&& f, double a, double b, std::span<const double> breaks = {},
                 const QuadratureOptions& opt = {}) {
  if (!(b > a)) return 0.0;
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  const auto cuts = detail::quadrature_cuts(a, b, breaks);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    double l1 = 0.0;
    const double coarse = Rule::integrate(f, cuts[i], cuts[i + 1], 0, 0.0, &err, &l1);
    if (err <= opt.abs_floor) {
      total += coarse;
      continue;
    }
    // Relative tolerance, relaxed so that absolute error never has to beat the floor.
    const double tol = std::max(opt.rel_tol, opt.abs_floor / std::max(l1, std::numeric_limits<double>::min()));
    total += Rule::integrate(f, cuts[i], cuts[i + 1], opt.max_depth, tol, &err);
  }
  return total;
}

}  // namespace domattr
