#pragma once

#include <algorithm>
#include <cmath>

#include "domattr/dist_models.hpp"

namespace domattr {

/// Symmetric 2x2 covariance of the Gaussian limit of (X, X^2).
struct CovMatrix2 {
  double v11 = 0.0;
  double v12 = 0.0;
  double v22 = 0.0;

  double determinant() const { return v11 * v22 - v12 * v12; }

  bool is_psd(double tol = 1e-12) const {
    return v11 >= -tol && v22 >= -tol && determinant() >= -tol;
  }
};

/// U(x, y) = int_0^x int_0^y P(X > u, X^2 > v) dv du = int int F-bar(max(u, sqrt v)).
///
/// The rectangle is split along v = u^2. For u < z = min(x, sqrt y) the inner
/// integral over v is u^2 F-bar(u) + m2(y) - m2(u^2) = m2(y) - V(u), and
/// int_0^z V = z V(z) - E[X^3; X <= z]. Beyond sqrt y only F-bar(u) y remains:
///   U = E[X^3; X <= z] + z (y F-bar(sqrt y) + V(sqrt y) - V(z))
///       + y (m(x) - m(sqrt y))   when x > sqrt y.
inline double U_integral(const DistributionModel& model, double x, double y) {
  require(x >= 0.0 && y >= 0.0, "U_integral: x and y must be nonnegative");
  if (x == 0.0 || y == 0.0) return 0.0;
  const double root_y = std::sqrt(y);
  const double z = std::min(x, root_y);
  double gap = y * tail(model, root_y);
  if (z < root_y) gap += truncated_second_moment(model, root_y) - truncated_second_moment(model, z);
  double total = truncated_third_moment(model, z) + z * gap;
  if (x > root_y) total += y * (integrated_tail(model, x) - integrated_tail(model, root_y));
  return total;
}

/// W(x, y) = E[X * X^2 ; X <= x, X^2 <= y] = E[X^3 ; X <= min(x, sqrt y)].
inline double W_integral(const DistributionModel& model, double x, double y) {
  require(x >= 0.0 && y >= 0.0, "W_integral: x and y must be nonnegative");
  return truncated_third_moment(model, std::min(x, std::sqrt(y)));
}

struct TransferBound {
  double lhs;  ///< |W(x, y) - U(x, y)|
  double rhs;  ///< 2xy P(X > x) + 2xy P(X^2 > y)
  bool holds;
};

inline TransferBound check_transfer_bound(const DistributionModel& model, double x, double y) {
  require(x > 0.0 && y > 0.0, "check_transfer_bound: x and y must be positive");
  const double lhs = std::abs(W_integral(model, x, y) - U_integral(model, x, y));
  const double rhs = 2.0 * x * y * (tail(model, x) + tail(model, std::sqrt(y)));
  return {lhs, rhs, lhs <= rhs + 1e-9};
}

/// Omega(x, y) = int_0^x int_0^y max(u, sqrt v)^-alpha dv du, 0 < alpha < 2,
/// in closed form. With s = sqrt y and z = min(x, s):
///   Omega = 2 y^(1 - alpha/2) z / (2 - alpha) - alpha z^(3 - alpha) / ((2 - alpha)(3 - alpha))
///           + y int_s^x u^-alpha du   (last term only when x > s).
inline double omega_limit(double alpha, double x, double y) {
  require(alpha > 0.0 && alpha < 2.0, "omega_limit: alpha must lie in (0, 2)");
  require(x >= 0.0 && y >= 0.0, "omega_limit: x and y must be nonnegative");
  if (x == 0.0 || y == 0.0) return 0.0;
  const double s = std::sqrt(y);
  const double z = std::min(x, s);
  double total = 2.0 * std::pow(y, 1.0 - 0.5 * alpha) * z / (2.0 - alpha) -
                 alpha * std::pow(z, 3.0 - alpha) / ((2.0 - alpha) * (3.0 - alpha));
  if (x > s) total += y * std::pow(s, 1.0 - alpha) * detail::pow_minus_one_over(x / s, 1.0 - alpha);
  return total;
}

/// U(t x, t^2 y) / (t^3 F-bar(t)); tends to omega_limit(alpha, x, y) for
/// tails in RV(-alpha), 0 < alpha < 2.
inline double omega_convergence_ratio(const DistributionModel& model, double t, double x, double y) {
  require(t >= 1.0, "omega_convergence_ratio: t must be at least 1");
  return U_integral(model, t * x, t * t * y) / (t * t * t * tail(model, t));
}

/// Covariance of the joint Gaussian limit of (X, X^2) when X^2 is in the
/// normal domain of attraction. Diagonal when E X^4 is infinite.
inline CovMatrix2 sigma_matrix(const MomentTable& m) {
  if (m.mu2.is_infinite()) fail(ErrorCategory::invalid_argument, "sigma_matrix: requires a finite second moment");
  const double mu = m.mu.value();
  const double mu2 = m.mu2.value();
  const double v11 = (mu2 - mu * mu) / mu2;
  if (m.mu4.is_infinite()) return {v11, 0.0, 1.0};
  const double mu3 = m.mu3.value();
  const double mu4 = m.mu4.value();
  return {v11, (mu3 - mu * mu2) / std::sqrt(mu2 * mu4), (mu4 - mu2 * mu2) / mu4};
}

}  // namespace domattr
