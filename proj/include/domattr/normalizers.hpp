#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "domattr/dist_models.hpp"
#include "domattr/root.hpp"

namespace domattr {

/// Which joint limit theorem applies to (X, X^2).
///   I    0 < alpha < 1
///   II   1 <= alpha < 2
///   III  alpha = 2
///   IV   2 < alpha < 4
///   V    X^2 in the normal domain of attraction (alpha >= 4, or all moments finite)
enum class Regime { I, II, III, IV, V };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::I: return "I";
    case Regime::II: return "II";
    case Regime::III: return "III";
    case Regime::IV: return "IV";
    case Regime::V: return "V";
  }
  return "?";
}

inline Regime parse_regime(std::string_view s) {
  for (Regime r : {Regime::I, Regime::II, Regime::III, Regime::IV, Regime::V})
    if (to_string(r) == s) return r;
  fail(ErrorCategory::invalid_argument, "unknown regime '" + std::string(s) + "'");
}

inline Regime classify(const DistributionModel& model) {
  const ExtendedReal index = model.tail_index();
  if (index.is_infinite()) return Regime::V;
  const double alpha = index.value();
  if (alpha < 1.0) return Regime::I;
  if (alpha < 2.0) return Regime::II;
  if (alpha == 2.0) return Regime::III;
  if (alpha < 4.0) return Regime::IV;
  return Regime::V;
}

struct NormalizerOptions {
  /// Use the Pareto closed forms where they exist; false always runs the root finder.
  bool closed_form = true;
  Route route = Route::automatic;
};

namespace detail {

inline const Pareto* as_pareto(const DistributionModel& model) { return std::get_if<Pareto>(&model.law()); }

}  // namespace detail

/// a(n): n F-bar(a) = 1 when alpha < 2, otherwise n V(a) / a^2 = 1.
inline double solve_a(const DistributionModel& model, double n, const NormalizerOptions& opt = {}) {
  require(n >= 1.0, "solve_a: n must be at least 1");
  const Regime regime = classify(model);
  if (regime == Regime::I || regime == Regime::II) {
    if (const Pareto* p = detail::as_pareto(model); p && opt.closed_form) return std::pow(n, 1.0 / p->alpha);
    return solve_decreasing([&](double a) { return n * tail(model, a); }, 1.0, "solve_a");
  }
  return solve_downcrossing(
      [&](double a) { return n * truncated_second_moment(model, a, opt.route) / (a * a); }, 1.0, "solve_a");
}

/// b(n): a(n)^2 in regime I; n F-bar(sqrt b) = 1 in II to IV; n V2(b) / b^2 = 1 in V.
inline double solve_b(const DistributionModel& model, double n, const NormalizerOptions& opt = {}) {
  require(n >= 1.0, "solve_b: n must be at least 1");
  const Regime regime = classify(model);
  if (regime == Regime::I) {
    const double a = solve_a(model, n, opt);
    return a * a;
  }
  if (regime != Regime::V) {
    if (const Pareto* p = detail::as_pareto(model); p && opt.closed_form) return std::pow(n, 2.0 / p->alpha);
    return solve_decreasing([&](double b) { return n * tail(model, std::sqrt(b)); }, 1.0, "solve_b");
  }
  return solve_downcrossing(
      [&](double b) { return n * squared_functionals(model, b, opt.route).v2 / (b * b); }, 1.0, "solve_b");
}

struct Centering {
  double c;
  double d;
};

/// Centering constants: c for the sum of X, d for the sum of X^2.
inline Centering centering(const DistributionModel& model, double n, const NormalizerOptions& opt = {}) {
  require(n >= 1.0, "centering: n must be at least 1");
  const Regime regime = classify(model);
  const MomentTable m = moments(model);
  switch (regime) {
    case Regime::I:
      return {0.0, 0.0};
    case Regime::II:
      if (m.mu.is_infinite()) return {n * integrated_tail(model, solve_a(model, n, opt), opt.route), 0.0};
      return {n * m.mu.value(), 0.0};
    case Regime::III:
      return {n * m.mu.value(), n * squared_functionals(model, solve_b(model, n, opt), opt.route).m2};
    case Regime::IV:
    case Regime::V:
      return {n * m.mu.value(), n * m.mu2.value()};
  }
  return {0.0, 0.0};
}

struct NormalizerRow {
  std::uint64_t n;
  double a;
  double b;
  double c;
  double d;
  /// n m(a(n)); the scale of the sum of X in regime II.
  double mean_scale;
  Regime regime;
};

inline NormalizerRow normalizer_row(const DistributionModel& model, std::uint64_t n, const NormalizerOptions& opt = {}) {
  const double nd = static_cast<double>(n);
  const double a = solve_a(model, nd, opt);
  const auto [c, d] = centering(model, nd, opt);
  return {n, a, solve_b(model, nd, opt), c, d, nd * integrated_tail(model, a, opt.route), classify(model)};
}

/// Normalizers for a fixed model, memoized over the sample sizes of one experiment.
class Normalizers {
 public:
  Normalizers(DistributionModel model, const std::vector<std::uint64_t>& ns, NormalizerOptions opt = {})
      : model_(std::move(model)), regime_(classify(model_)) {
    rows_.reserve(ns.size());
    for (std::uint64_t n : ns) rows_.push_back(normalizer_row(model_, n, opt));
  }

  const DistributionModel& model() const { return model_; }
  Regime regime() const { return regime_; }
  const std::vector<NormalizerRow>& rows() const { return rows_; }

  const NormalizerRow& at(std::uint64_t n) const {
    for (const auto& r : rows_)
      if (r.n == n) return r;
    fail(ErrorCategory::invalid_argument, "normalizers: n=" + std::to_string(n) + " was not tabulated");
  }

 private:
  DistributionModel model_;
  Regime regime_;
  std::vector<NormalizerRow> rows_;
};

}  // namespace domattr
