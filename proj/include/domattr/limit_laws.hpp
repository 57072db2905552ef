#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "domattr/bivariate.hpp"
#include "domattr/dist_models.hpp"
#include "domattr/parallel.hpp"
#include "domattr/rng.hpp"

namespace domattr {

/// Laplace-Stieltjes transform E exp(-s Y) of the limit of the normalized sums
/// of X, for tail index alpha in (0, 2]:
///   0 < alpha < 1   exp(-Gamma(1 - alpha) s^alpha)
///   alpha = 1       exp(s log s + gamma s)      (centering n m(a(n)))
///   1 < alpha < 2   exp(Gamma(2 - alpha) s^alpha / (alpha - 1))   (mean zero)
///   alpha = 2       exp(s^2 v / 2), v = 1 - mu^2/mu2, or 1 when mu2 is infinite
/// For alpha >= 1 the log-transform is convex, which fixes the signs.
inline double lst_phi(double alpha, double s, const std::optional<MomentTable>& m = std::nullopt) {
  require(alpha > 0.0 && alpha <= 2.0, "lst_phi: alpha must lie in (0, 2]");
  require(s > 0.0, "lst_phi: s must be positive");
  if (alpha < 1.0) return std::exp(-std::tgamma(1.0 - alpha) * std::pow(s, alpha));
  if (alpha == 1.0) return std::exp(s * std::log(s) + std::numbers::egamma * s);
  if (alpha < 2.0) return std::exp(std::tgamma(2.0 - alpha) * std::pow(s, alpha) / (alpha - 1.0));
  double v = 1.0;
  if (m && m->mu2.is_finite()) v = 1.0 - m->mu.value() * m->mu.value() / m->mu2.value();
  return std::exp(0.5 * s * s * v);
}

/// One draw of the totally skewed stable law whose transform is lst_phi(index),
/// index in (0, 2). Chambers-Mallows-Stuck with beta = 1, then scaled; the
/// law S_a(sigma, 1, 0) has E exp(-sX) = exp(-sigma^a s^a / cos(pi a / 2)).
inline double stable_variate(double index, Stream& stream) {
  constexpr double pi = std::numbers::pi;
  const double v = pi * (stream.uniform() - 0.5);
  const double w = stream.exponential();
  if (index == 1.0) {
    // (pi/2) S_1(1, 1, 0) + log(pi/2) - gamma, simplified.
    const double h = 0.5 * pi + v;
    return h * std::tan(v) - std::log(w * std::cos(v) / h) - std::numbers::egamma;
  }
  const double a = index;
  const double t = std::tan(0.5 * pi * a);
  const double b = std::atan(t) / a;
  const double s = std::pow(1.0 + t * t, 0.5 / a);
  const double x = s * std::sin(a * (v + b)) / std::pow(std::cos(v), 1.0 / a) *
                   std::pow(std::cos(v - a * (v + b)) / w, (1.0 - a) / a);
  const double c = a < 1.0 ? std::tgamma(1.0 - a) : std::tgamma(2.0 - a) / (a - 1.0);
  return std::pow(c * std::abs(std::cos(0.5 * pi * a)), 1.0 / a) * x;
}

inline std::vector<double> sample_stable_marginal(double index, std::size_t count, std::uint64_t seed) {
  require(index > 0.0 && index < 2.0, "sample_stable_marginal: index must lie in (0, 2)");
  std::vector<double> out(count);
  Stream stream(seed);
  for (double& x : out) x = stable_variate(index, stream);
  return out;
}

/// Positive stable law with transform exp(-Gamma(1 - alpha) s^alpha).
inline std::vector<double> sample_positive_stable(double alpha, std::size_t count, std::uint64_t seed) {
  require(alpha > 0.0 && alpha < 1.0, "sample_positive_stable: alpha must lie in (0, 1)");
  return sample_stable_marginal(alpha, count, seed);
}

struct JointDraw {
  double y1;
  double y2;
};

/// Joint limit (Y1(alpha), Y2(alpha/2)) as shot noise over one Poisson
/// sequence G_1 < G_2 < ...:
///   y1 = sum G_i^(-1/alpha)  (compensated for alpha >= 1),  y2 = sum G_i^(-2/alpha).
/// The first `terms` arrivals are summed exactly. Beyond G_N = g the rest is
/// replaced by its mean plus a Gaussian with the exact tail covariance,
///   E    = int_g^inf t^-p dt = g^(1-p)/(p-1)
///   Cov  = int_g^inf t^-(p+q) dt
/// with p, q in {1/alpha, 2/alpha}. For alpha >= 1 the y1 mean is replaced by
/// the compensator: -int_0^g t^(-1/alpha) dt, and at alpha = 1, -log g - 1.
struct JointSeries {
  double alpha;
  std::size_t terms = 1000;

  JointDraw draw(Stream& arrivals, Stream& remainder) const {
    const double p = 1.0 / alpha;
    double g = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < terms; ++i) {
      g += arrivals.exponential();
      const double x = std::pow(g, -p);
      s1 += x;
      s2 += x * x;
    }
    const auto tail_integral = [g](double e) { return std::pow(g, 1.0 - e) / (e - 1.0); };
    const double m1 = alpha == 1.0 ? -std::log(g) - 1.0 : tail_integral(p);
    const double c11 = tail_integral(2.0 * p);
    const double c12 = tail_integral(3.0 * p);
    const double c22 = tail_integral(4.0 * p);
    const double z1 = remainder.normal();
    const double z2 = remainder.normal();
    const double l11 = std::sqrt(c11);
    const double l21 = c12 / l11;
    const double l22 = std::sqrt(std::max(0.0, c22 - l21 * l21));
    return {s1 + m1 + l11 * z1, s2 + tail_integral(2.0 * p) + l21 * z1 + l22 * z2};
  }

  /// Draw i of the sample seeded by `seed`; independent of every other index.
  JointDraw draw_at(std::uint64_t seed, std::uint64_t i) const {
    Stream arrivals(derive_seed(seed, i, 1));
    Stream remainder(derive_seed(seed, i, 2));
    return draw(arrivals, remainder);
  }
};

inline std::vector<JointDraw> sample_joint_series(double alpha, std::size_t count, std::uint64_t seed,
                                                  std::size_t terms = 1000, unsigned threads = 1) {
  require(alpha > 0.0 && alpha < 2.0, "sample_joint_series: alpha must lie in (0, 2)");
  require(terms >= 1, "sample_joint_series: terms must be positive");
  const JointSeries series{alpha, terms};
  std::vector<JointDraw> out(count);
  parallel_for(count, threads, [&](std::size_t i) { out[i] = series.draw_at(seed, i); });
  return out;
}

/// Lower factor L with L L^T = cov, via the eigen-decomposition so that
/// singular matrices are handled exactly.
struct Gaussian2 {
  double l11, l12, l21, l22;

  explicit Gaussian2(const CovMatrix2& cov) {
    if (!cov.is_psd()) fail(ErrorCategory::invalid_argument, "sample_gaussian2: covariance is not positive semidefinite");
    const double theta = 0.5 * std::atan2(2.0 * cov.v12, cov.v11 - cov.v22);
    const double c = std::cos(theta), s = std::sin(theta);
    const double lam1 = std::max(0.0, cov.v11 * c * c + 2.0 * cov.v12 * s * c + cov.v22 * s * s);
    const double lam2 = std::max(0.0, cov.v11 * s * s - 2.0 * cov.v12 * s * c + cov.v22 * c * c);
    const double r1 = std::sqrt(lam1), r2 = std::sqrt(lam2);
    l11 = c * r1;
    l12 = -s * r2;
    l21 = s * r1;
    l22 = c * r2;
  }

  JointDraw draw(Stream& stream) const {
    const double z1 = stream.normal();
    const double z2 = stream.normal();
    return {l11 * z1 + l12 * z2, l21 * z1 + l22 * z2};
  }
};

inline std::vector<JointDraw> sample_gaussian2(const CovMatrix2& cov, std::size_t count, std::uint64_t seed) {
  const Gaussian2 g(cov);
  std::vector<JointDraw> out(count);
  Stream stream(seed);
  for (auto& d : out) d = g.draw(stream);
  return out;
}

/// Limits of the finite-variance (normal domain) statistics, written as
/// k2 Y2 - k1 Y1 over the Gaussian pair with covariance sigma_matrix:
///   t_ratio     Y2/mu^2 - 2 mu2^(3/2) / (mu^3 mu4^(1/2)) Y1
///   c_ratio     Y2/mu   -   mu2^(3/2) / (mu^2 mu4^(1/2)) Y1
///   dispersion  Y2/mu   - (mu2/mu^2 + 1) (mu2/mu4)^(1/2) Y1
/// When mu4 is infinite the Y1 term vanishes.
enum class CompositeKind { t_ratio, c_ratio, dispersion };

inline std::string_view to_string(CompositeKind k) {
  switch (k) {
    case CompositeKind::t_ratio: return "t_ratio";
    case CompositeKind::c_ratio: return "c_ratio";
    case CompositeKind::dispersion: return "dispersion";
  }
  return "?";
}

struct CompositeCoefficients {
  double k2;
  double k1;
};

inline CompositeCoefficients composite_coefficients(CompositeKind kind, const MomentTable& m) {
  if (m.mu2.is_infinite()) fail(ErrorCategory::invalid_argument, "composite_law: requires a finite second moment");
  const double mu = m.mu.value();
  const double mu2 = m.mu2.value();
  const double k2 = kind == CompositeKind::t_ratio ? 1.0 / (mu * mu) : 1.0 / mu;
  if (m.mu4.is_infinite()) return {k2, 0.0};
  const double ratio = std::sqrt(mu2 / m.mu4.value());
  switch (kind) {
    case CompositeKind::t_ratio: return {k2, 2.0 * mu2 / (mu * mu * mu) * ratio};
    case CompositeKind::c_ratio: return {k2, mu2 / (mu * mu) * ratio};
    case CompositeKind::dispersion: return {k2, (mu2 / (mu * mu) + 1.0) * ratio};
  }
  return {k2, 0.0};
}

inline std::vector<double> composite_law(CompositeKind kind, const MomentTable& m, std::size_t count, std::uint64_t seed) {
  const auto [k2, k1] = composite_coefficients(kind, m);
  const auto pairs = sample_gaussian2(sigma_matrix(m), count, seed);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = k2 * pairs[i].y2 - k1 * pairs[i].y1;
  return out;
}

// Reference laws for the theorem cells. Each is sampled in fixed blocks, each
// block from its own derived stream, so output never depends on thread count.

/// Stable marginal with transform lst_phi(index).
struct StableLaw {
  double index;
};

/// Functions of the joint series pair.
enum class RatioKind { y2_over_y1_sq, sqrt_y2_over_y1, y2_over_y1, y1_sq_over_y2 };

struct RatioLaw {
  double alpha;
  RatioKind kind;
  std::size_t terms = 1000;
};

struct CompositeLaw {
  CompositeKind kind;
  MomentTable moments;
};

struct NormalLaw {
  double sd;
};

struct DegenerateLaw {
  double point;
};

using LimitLaw = std::variant<StableLaw, RatioLaw, CompositeLaw, NormalLaw, DegenerateLaw>;

inline std::string describe(const LimitLaw& law) {
  return std::visit(
      overloaded{
          [](const StableLaw& l) { return "stable(index=" + format_double(l.index) + ")"; },
          [](const RatioLaw& l) {
            const char* f = l.kind == RatioKind::y2_over_y1_sq     ? "y2/y1^2"
                            : l.kind == RatioKind::sqrt_y2_over_y1 ? "sqrt(y2)/y1"
                            : l.kind == RatioKind::y2_over_y1      ? "y2/y1"
                                                                   : "y1^2/y2";
            return "joint(alpha=" + format_double(l.alpha) + ")." + f;
          },
          [](const CompositeLaw& l) {
            const auto [k2, k1] = composite_coefficients(l.kind, l.moments);
            return "gaussian2." + std::string(to_string(l.kind)) + "(" + format_double(k2) + " y2 - " +
                   format_double(k1) + " y1)";
          },
          [](const NormalLaw& l) { return "normal(sd=" + format_double(l.sd) + ")"; },
          [](const DegenerateLaw& l) { return "point(" + format_double(l.point) + ")"; }},
      law);
}

inline constexpr std::size_t kReferenceBlock = 1024;

inline std::vector<double> sample_law(const LimitLaw& law, std::size_t count, std::uint64_t seed, unsigned threads = 1) {
  std::vector<double> out(count);
  if (const auto* r = std::get_if<RatioLaw>(&law)) {
    const JointSeries series{r->alpha, r->terms};
    parallel_for(count, threads, [&](std::size_t i) {
      const auto [y1, y2] = series.draw_at(seed, i);
      switch (r->kind) {
        case RatioKind::y2_over_y1_sq: out[i] = y2 / (y1 * y1); break;
        case RatioKind::sqrt_y2_over_y1: out[i] = std::sqrt(y2) / y1; break;
        case RatioKind::y2_over_y1: out[i] = y2 / y1; break;
        case RatioKind::y1_sq_over_y2: out[i] = y1 * y1 / y2; break;
      }
    });
    return out;
  }
  const std::size_t blocks = (count + kReferenceBlock - 1) / kReferenceBlock;
  const auto fill_block = [&](std::size_t b) {
    Stream stream(derive_seed(seed, b));
    const std::size_t end = std::min(count, (b + 1) * kReferenceBlock);
    std::visit(overloaded{[&](const StableLaw& l) {
                            for (std::size_t i = b * kReferenceBlock; i < end; ++i) out[i] = stable_variate(l.index, stream);
                          },
                          [&](const CompositeLaw& l) {
                            const auto [k2, k1] = composite_coefficients(l.kind, l.moments);
                            const Gaussian2 g(sigma_matrix(l.moments));
                            for (std::size_t i = b * kReferenceBlock; i < end; ++i) {
                              const auto [y1, y2] = g.draw(stream);
                              out[i] = k2 * y2 - k1 * y1;
                            }
                          },
                          [&](const NormalLaw& l) {
                            for (std::size_t i = b * kReferenceBlock; i < end; ++i) out[i] = l.sd * stream.normal();
                          },
                          [&](const DegenerateLaw& l) {
                            for (std::size_t i = b * kReferenceBlock; i < end; ++i) out[i] = l.point;
                          },
                          [](const RatioLaw&) {}},
               law);
  };
  parallel_for(blocks, threads, fill_block);
  return out;
}

}  // namespace domattr
