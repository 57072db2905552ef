#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "domattr/error.hpp"
#include "domattr/ext_real.hpp"
#include "domattr/format.hpp"
#include "domattr/quadrature.hpp"
#include "domattr/rng.hpp"

namespace domattr {

// Positive laws with known tails. Pareto kinds have support [1, inf) with
// tail exactly x^-alpha (times 1/(1 + log x) for the log-corrected family).

struct Pareto {
  double alpha;
};

/// Tail x^-alpha / (1 + log x) on x >= 1: regularly varying with the same
/// index as Pareto but with a slowly varying correction.
struct ParetoLog {
  double alpha;
};

struct Bernoulli {
  double p;
};

struct Exponential {
  double rate;
};

struct MomentTable {
  ExtendedReal mu;
  ExtendedReal mu2;
  ExtendedReal mu3;
  ExtendedReal mu4;
  ExtendedReal sigma2;
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

class DistributionModel {
 public:
  using Law = std::variant<Pareto, ParetoLog, Bernoulli, Exponential>;

  static DistributionModel pareto(double alpha) {
    require(alpha > 0.0 && std::isfinite(alpha), "pareto: alpha must be a positive real");
    return DistributionModel(Pareto{alpha});
  }
  static DistributionModel pareto_log(double alpha) {
    require(alpha > 0.0 && std::isfinite(alpha), "paretolog: alpha must be a positive real");
    return DistributionModel(ParetoLog{alpha});
  }
  // p = 1 is accepted: it is the point mass at 1, useful as a boundary case.
  static DistributionModel bernoulli(double p) {
    require(p > 0.0 && p <= 1.0, "bernoulli: p must lie in (0, 1]");
    return DistributionModel(Bernoulli{p});
  }
  static DistributionModel exponential(double rate) {
    require(rate > 0.0 && std::isfinite(rate), "exp: rate must be a positive real");
    return DistributionModel(Exponential{rate});
  }

  const Law& law() const { return law_; }

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(law_);
  }

  /// alpha for the Pareto kinds, +inf for laws with all moments finite.
  ExtendedReal tail_index() const {
    return std::visit(overloaded{[](const Pareto& m) { return ExtendedReal(m.alpha); },
                                 [](const ParetoLog& m) { return ExtendedReal(m.alpha); },
                                 [](const auto&) { return ExtendedReal::infinity(); }},
                      law_);
  }

  /// The point where the tail has a kink or jump (support edge / atom).
  std::span<const double> kinks() const {
    static constexpr double one[] = {1.0};
    if (is<Exponential>()) return {};
    return one;
  }

  friend bool operator==(const DistributionModel& l, const DistributionModel& r) {
    return l.law_.index() == r.law_.index() && to_spec(l) == to_spec(r);
  }

  friend std::string to_spec(const DistributionModel& model) {
    return std::visit(
        overloaded{[](const Pareto& m) { return "pareto{alpha=" + format_double(m.alpha) + "}"; },
                   [](const ParetoLog& m) { return "paretolog{alpha=" + format_double(m.alpha) + "}"; },
                   [](const Bernoulli& m) { return "bernoulli{p=" + format_double(m.p) + "}"; },
                   [](const Exponential& m) { return "exp{rate=" + format_double(m.rate) + "}"; }},
        model.law_);
  }

 private:
  explicit DistributionModel(Law law) : law_(law) {}

  Law law_;
};

/// Parses `pareto{alpha=1.5}`, `paretolog{alpha=2}`, `bernoulli{p=0.3}`, `exp{rate=1}`.
inline DistributionModel parse_model(std::string_view text) {
  const SpecTerm term = parse_spec_term(text);
  const auto check_keys = [&](std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : term.params) {
      bool ok = false;
      for (auto a : allowed) ok = ok || key == a;
      if (!ok) fail(ErrorCategory::invalid_argument, term.name + ": unknown parameter '" + key + "'");
    }
  };
  if (term.name == "pareto") {
    check_keys({"alpha"});
    return DistributionModel::pareto(term.number("alpha"));
  }
  if (term.name == "paretolog") {
    check_keys({"alpha"});
    return DistributionModel::pareto_log(term.number("alpha"));
  }
  if (term.name == "bernoulli") {
    check_keys({"p"});
    return DistributionModel::bernoulli(term.number("p"));
  }
  if (term.name == "exp" || term.name == "exponential") {
    check_keys({"rate"});
    return DistributionModel::exponential(term.number_or("rate", 1.0));
  }
  fail(ErrorCategory::invalid_argument, "unknown model '" + term.name + "'");
}

/// How a functional is evaluated. `automatic` uses a closed form where one is
/// implemented and quadrature otherwise; `quadrature` always integrates the tail.
enum class Route { automatic, quadrature };

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// (x^e - 1) / e, continuous at e = 0 where it equals log x.
inline double pow_minus_one_over(double x, double e) {
  const double l = std::log(x);
  return e == 0.0 ? l : std::expm1(e * l) / e;
}

/// E[X^k I{X <= x}] for Pareto(alpha), x >= 1.
inline double pareto_partial_moment(double alpha, int k, double x) {
  if (x <= 1.0) return 0.0;
  if (std::isinf(x)) return k < alpha ? alpha / (alpha - k) : kInf;
  return alpha * pow_minus_one_over(x, k - alpha);
}

/// E[X^k I{X <= x}] for Exponential(rate): k!/rate^k * P(k + 1, rate x).
inline double exponential_partial_moment(double rate, int k, double x) {
  const double full = std::tgamma(k + 1.0) / std::pow(rate, k);
  if (std::isinf(x)) return full;
  return full * boost::math::gamma_p(k + 1.0, rate * x);
}

inline double pareto_log_tail(double alpha, double x) {
  if (x <= 1.0) return 1.0;
  return std::pow(x, -alpha) / (1.0 + std::log(x));
}

/// E X^k for the log-corrected Pareto: 1 + k e^b E1(b) with b = alpha - k.
inline ExtendedReal pareto_log_moment(double alpha, int k) {
  if (k >= alpha) return ExtendedReal::infinity();
  const double b = alpha - k;
  return 1.0 + k * std::exp(b) * boost::math::expint(1, b);
}

}  // namespace detail

/// Tail F-bar(x) = P(X > x), x >= 0.
inline double tail(const DistributionModel& model, double x) {
  require(x >= 0.0, "tail: x must be nonnegative");
  return std::visit(
      overloaded{[x](const Pareto& m) { return x <= 1.0 ? 1.0 : std::pow(x, -m.alpha); },
                 [x](const ParetoLog& m) { return detail::pareto_log_tail(m.alpha, x); },
                 [x](const Bernoulli& m) { return x < 1.0 ? m.p : 0.0; },
                 [x](const Exponential& m) { return std::exp(-m.rate * x); }},
      model.law());
}

inline double cdf(const DistributionModel& model, double x) {
  if (x < 0.0) return 0.0;
  return 1.0 - tail(model, x);
}

/// Generalized inverse of the cdf: inf{x : F(x) >= u}, u in [0, 1].
inline double quantile(const DistributionModel& model, double u) {
  require(u >= 0.0 && u <= 1.0, "quantile: u must lie in [0, 1]");
  return std::visit(
      overloaded{[u](const Pareto& m) { return std::pow(1.0 - u, -1.0 / m.alpha); },
                 [u](const ParetoLog& m) {
                   if (u == 0.0) return 1.0;
                   if (u == 1.0) return detail::kInf;
                   // Solve alpha t + log(1 + t) = -log(1 - u) for t = log x.
                   const double target = -std::log1p(-u);
                   double lo = 0.0;
                   double hi = target / m.alpha;
                   double t = hi;
                   for (int i = 0; i < 100; ++i) {
                     const double h = m.alpha * t + std::log1p(t) - target;
                     if (h > 0.0) hi = t; else lo = t;
                     double next = t - h / (m.alpha + 1.0 / (1.0 + t));
                     if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                     if (std::abs(next - t) <= 1e-15 * (1.0 + t)) {
                       t = next;
                       break;
                     }
                     t = next;
                   }
                   return std::exp(t);
                 },
                 [u](const Bernoulli& m) { return u <= 1.0 - m.p ? 0.0 : 1.0; },
                 [u](const Exponential& m) { return -std::log1p(-u) / m.rate; }},
      model.law());
}

inline MomentTable moments(const DistributionModel& model) {
  const auto table = [](auto moment) {
    MomentTable t{moment(1), moment(2), moment(3), moment(4), ExtendedReal::infinity()};
    if (t.mu2.is_finite()) t.sigma2 = t.mu2.value() - t.mu.value() * t.mu.value();
    return t;
  };
  return std::visit(
      overloaded{[&](const Pareto& m) {
                   return table([&](int k) {
                     return k < m.alpha ? ExtendedReal(m.alpha / (m.alpha - k)) : ExtendedReal::infinity();
                   });
                 },
                 [&](const ParetoLog& m) {
                   return table([&](int k) { return detail::pareto_log_moment(m.alpha, k); });
                 },
                 [&](const Bernoulli& m) { return table([&](int) { return ExtendedReal(m.p); }); },
                 [&](const Exponential& m) {
                   return table([&](int k) { return ExtendedReal(std::tgamma(k + 1.0) / std::pow(m.rate, k)); });
                 }},
      model.law());
}

namespace detail {

/// E[X^k I{X <= x}] by integrating the tail:
///   int_0^x k y^(k-1) (F-bar(y) - F-bar(x)) dy.
/// This is Stieltjes integration by parts, so atoms need no density, and the
/// integrand is nonnegative (no cancellation against x^k F-bar(x)).
inline double partial_moment_quadrature(const DistributionModel& model, int k, double x) {
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) {
    const MomentTable mt = moments(model);
    const ExtendedReal full = k == 1 ? mt.mu : k == 2 ? mt.mu2 : k == 3 ? mt.mu3 : mt.mu4;
    if (full.is_infinite()) return kInf;
  }
  const double edge = std::isinf(x) ? 0.0 : tail(model, x);
  const auto integrand = [&](double y) { return k * std::pow(y, k - 1) * (tail(model, y) - edge); };
  return integrate(integrand, 0.0, x, model.kinks());
}

inline double partial_moment(const DistributionModel& model, int k, double x, Route route) {
  if (route == Route::quadrature) return partial_moment_quadrature(model, k, x);
  return std::visit(overloaded{[&](const Pareto& m) { return pareto_partial_moment(m.alpha, k, x); },
                               [&](const ParetoLog&) { return partial_moment_quadrature(model, k, x); },
                               [&](const Bernoulli& m) { return x >= 1.0 ? m.p : 0.0; },
                               [&](const Exponential& m) { return exponential_partial_moment(m.rate, k, x); }},
                    model.law());
}

}  // namespace detail

/// V(x) = int_0^x y^2 dF(y).
inline double truncated_second_moment(const DistributionModel& model, double x, Route route = Route::automatic) {
  require(x >= 0.0, "truncated_second_moment: x must be nonnegative");
  return detail::partial_moment(model, 2, x, route);
}

/// E[X^3 I{X <= x}]; the bivariate W functional reduces to this.
inline double truncated_third_moment(const DistributionModel& model, double x, Route route = Route::automatic) {
  require(x >= 0.0, "truncated_third_moment: x must be nonnegative");
  return detail::partial_moment(model, 3, x, route);
}

/// m(x) = int_0^x F-bar(t) dt.
inline double integrated_tail(const DistributionModel& model, double x, Route route = Route::automatic) {
  require(x >= 0.0, "integrated_tail: x must be nonnegative");
  if (x == 0.0) return 0.0;
  const auto by_quadrature = [&] {
    if (std::isinf(x) && moments(model).mu.is_infinite()) return detail::kInf;
    return integrate([&](double t) { return tail(model, t); }, 0.0, x, model.kinks());
  };
  if (route == Route::quadrature) return by_quadrature();
  return std::visit(
      overloaded{[&](const Pareto& m) {
                   if (x <= 1.0) return x;
                   if (std::isinf(x)) return m.alpha > 1.0 ? m.alpha / (m.alpha - 1.0) : detail::kInf;
                   return 1.0 + detail::pow_minus_one_over(x, 1.0 - m.alpha);
                 },
                 [&](const ParetoLog&) { return by_quadrature(); },
                 [&](const Bernoulli& m) { return m.p * std::min(x, 1.0); },
                 [&](const Exponential& m) { return -std::expm1(-m.rate * x) / m.rate; }},
      model.law());
}

struct SquaredFunctionals {
  double m2;  ///< int_0^x F-bar(sqrt u) du, the integrated tail of X^2
  double v2;  ///< E[X^4 I{X^2 <= x}], the truncated second moment of X^2
};

inline SquaredFunctionals squared_functionals(const DistributionModel& model, double x, Route route = Route::automatic) {
  require(x >= 0.0, "squared_functionals: x must be nonnegative");
  const double root = std::sqrt(x);
  const double v2 = detail::partial_moment(model, 4, root, route);
  const auto m2_by_quadrature = [&] {
    if (x == 0.0) return 0.0;
    if (std::isinf(x) && moments(model).mu2.is_infinite()) return detail::kInf;
    return integrate([&](double u) { return tail(model, std::sqrt(u)); }, 0.0, x, model.kinks());
  };
  if (route == Route::quadrature) return {m2_by_quadrature(), v2};
  const double m2 = std::visit(
      overloaded{[&](const Pareto& m) {
                   if (x <= 1.0) return x;
                   if (std::isinf(x)) return m.alpha > 2.0 ? m.alpha / (m.alpha - 2.0) : detail::kInf;
                   return 1.0 + detail::pow_minus_one_over(x, 1.0 - 0.5 * m.alpha);
                 },
                 [&](const ParetoLog&) { return m2_by_quadrature(); },
                 [&](const Bernoulli& m) { return m.p * std::min(x, 1.0); },
                 [&](const Exponential& m) {
                   if (std::isinf(x)) return 2.0 / (m.rate * m.rate);
                   return 2.0 / (m.rate * m.rate) * boost::math::gamma_p(2.0, m.rate * root);
                 }},
      model.law());
  return {m2, v2};
}

/// Overwrites `out` with i.i.d. draws from `model`.
inline void sample_into(const DistributionModel& model, std::span<double> out, Stream& stream) {
  std::visit(overloaded{[&](const Pareto& m) {
                          const double e = -1.0 / m.alpha;
                          for (double& x : out) x = std::pow(stream.uniform(), e);
                        },
                        [&](const ParetoLog&) {
                          for (double& x : out) x = quantile(model, 1.0 - stream.uniform());
                        },
                        [&](const Bernoulli& m) {
                          for (double& x : out) x = stream.uniform() < m.p ? 1.0 : 0.0;
                        },
                        [&](const Exponential& m) {
                          for (double& x : out) x = stream.exponential() / m.rate;
                        }},
             model.law());
}

/// `count` i.i.d. draws; identical for identical (model, count, seed).
inline std::vector<double> sample(const DistributionModel& model, std::size_t count, std::uint64_t seed) {
  require(count >= 1, "sample: count must be positive");
  std::vector<double> out(count);
  Stream stream(seed);
  sample_into(model, out, stream);
  return out;
}

}  // namespace domattr
