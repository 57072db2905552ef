#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "domattr/dist_models.hpp"
#include "domattr/normalizers.hpp"

namespace domattr {

enum class Stat { T, C, SV, SD, T2 };

inline constexpr std::array<Stat, 5> kAllStats{Stat::T, Stat::C, Stat::SV, Stat::SD, Stat::T2};

inline std::string_view to_string(Stat s) {
  switch (s) {
    case Stat::T: return "T";
    case Stat::C: return "C";
    case Stat::SV: return "SV";
    case Stat::SD: return "SD";
    case Stat::T2: return "T2";
  }
  return "?";
}

inline Stat parse_stat(std::string_view s) {
  for (Stat st : kAllStats)
    if (to_string(st) == s) return st;
  fail(ErrorCategory::invalid_argument, "unknown statistic '" + std::string(s) + "' (expected T, C, SV, SD or T2)");
}

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct SampleStats {
  std::size_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double t_ratio = 0.0;  ///< T = sum X^2 / (sum X)^2
  double c_ratio = 0.0;  ///< C = sum X^2 / sum X
  double excess = 0.0;   ///< n T - 1, from centered squares
  double sv = 0.0;       ///< sqrt(n T - 1)
  double sd = 0.0;       ///< C - mean = (n T - 1) mean
  std::optional<double> t2;  ///< n / (n T - 1); empty when all values are equal
  bool degenerate = false;

  double mean() const { return sum / static_cast<double>(n); }
};

/// The ratio statistics of a nonnegative sample.
inline SampleStats compute_stats(std::span<const double> data) {
  require(!data.empty(), "compute_stats: data must be nonempty");
  CompensatedSum s, s2;
  double lo = data[0], hi = data[0];
  for (double x : data) {
    require(x >= 0.0 && std::isfinite(x), "compute_stats: data must be finite and nonnegative");
    s.add(x);
    s2.add(x * x);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  SampleStats st;
  st.n = data.size();
  st.sum = s.value();
  st.sum_sq = s2.value();
  if (st.sum == 0.0) fail(ErrorCategory::all_zero_sample, "compute_stats: all observations are zero");
  const double n = static_cast<double>(st.n);
  st.t_ratio = st.sum_sq / (st.sum * st.sum);
  st.c_ratio = st.sum_sq / st.sum;
  st.degenerate = lo == hi;
  if (!st.degenerate) {
    const double mean = st.sum / n;
    CompensatedSum centered;
    for (double x : data) centered.add((x - mean) * (x - mean));
    st.excess = n * centered.value() / (st.sum * st.sum);
  }
  st.sv = std::sqrt(st.excess);
  st.sd = st.excess * st.mean();
  if (st.excess > 0.0) st.t2 = n / st.excess;
  return st;
}

/// Everything a left-hand side may depend on.
struct CellInputs {
  const SampleStats& s;
  const NormalizerRow& row;
  const MomentTable& m;
};

namespace detail {

inline double need_t2(const SampleStats& s) {
  if (!s.t2) fail(ErrorCategory::undefined_cell, "t^2 is undefined on a sample with n T = 1");
  return *s.t2;
}

inline double finite(const ExtendedReal& x, const char* what) {
  if (x.is_infinite()) fail(ErrorCategory::undefined_cell, std::string("cell needs a finite ") + what);
  return x.value();
}

inline double nn(const CellInputs& in) { return static_cast<double>(in.s.n); }
inline double mu(const CellInputs& in) { return finite(in.m.mu, "mean"); }
inline double mu2(const CellInputs& in) { return finite(in.m.mu2, "second moment"); }
inline double sigma2(const CellInputs& in) { return mu2(in) - mu(in) * mu(in); }

/// d(n)/(n mu^2) - 1, the moving centering of the spread statistics at alpha = 2.
inline double c_moving(const CellInputs& in) {
  const double c = in.row.d / (nn(in) * mu(in) * mu(in)) - 1.0;
  if (!(c > 0.0)) fail(ErrorCategory::undefined_cell, "d(n)/(n mu^2) - 1 must be positive");
  return c;
}

/// sigma^2/mu^2.
inline double c_fixed(const CellInputs& in) {
  const double c = sigma2(in) / (mu(in) * mu(in));
  if (!(c > 0.0)) fail(ErrorCategory::undefined_cell, "variance must be positive");
  return c;
}

}  // namespace detail

using LhsFn = double (*)(const CellInputs&);

struct LhsEntry {
  Stat stat;
  Regime regime;
  std::string_view formula;
  LhsFn fn;
};

// Left-hand sides: the normalized statistic that converges to the cell's limit
// law. ms is n m(a(n)); c(n) = d(n)/(n mu^2) - 1; c = sigma^2/mu^2.
// clang-format off
inline constexpr std::array<LhsEntry, 25> kLhsTable{{
  {Stat::T,  Regime::I,   "T",                                 [](const CellInputs& in) { return in.s.t_ratio; }},
  {Stat::SV, Regime::I,   "SV/sqrt(n)",                        [](const CellInputs& in) { return in.s.sv / std::sqrt(detail::nn(in)); }},
  {Stat::C,  Regime::I,   "C/a",                               [](const CellInputs& in) { return in.s.c_ratio / in.row.a; }},
  {Stat::SD, Regime::I,   "SD/a",                              [](const CellInputs& in) { return in.s.sd / in.row.a; }},
  {Stat::T2, Regime::I,   "t^2",                               [](const CellInputs& in) { return detail::need_t2(in.s); }},

  {Stat::T,  Regime::II,  "(ms/a)^2 T",                        [](const CellInputs& in) { const double r = in.row.mean_scale / in.row.a; return r * r * in.s.t_ratio; }},
  {Stat::SV, Regime::II,  "ms/(sqrt(n) a) SV",                 [](const CellInputs& in) { return in.row.mean_scale / (std::sqrt(detail::nn(in)) * in.row.a) * in.s.sv; }},
  {Stat::C,  Regime::II,  "ms/a^2 C",                          [](const CellInputs& in) { return in.row.mean_scale / (in.row.a * in.row.a) * in.s.c_ratio; }},
  {Stat::SD, Regime::II,  "ms/a^2 SD",                         [](const CellInputs& in) { return in.row.mean_scale / (in.row.a * in.row.a) * in.s.sd; }},
  {Stat::T2, Regime::II,  "(a/ms)^2 t^2",                      [](const CellInputs& in) { const double r = in.row.a / in.row.mean_scale; return r * r * detail::need_t2(in.s); }},

  {Stat::T,  Regime::III, "(n/b)(nT - d/(n mu^2))",            [](const CellInputs& in) { const double n = detail::nn(in), mu = detail::mu(in); return n / in.row.b * (n * in.s.t_ratio - in.row.d / (n * mu * mu)); }},
  {Stat::SV, Regime::III, "(n sqrt(c(n))/b)(SV - sqrt(c(n)))", [](const CellInputs& in) { const double r = std::sqrt(detail::c_moving(in)); return detail::nn(in) * r / in.row.b * (in.s.sv - r); }},
  {Stat::C,  Regime::III, "(d/b)((n/d) C - 1/mu)",             [](const CellInputs& in) { return in.row.d / in.row.b * (detail::nn(in) / in.row.d * in.s.c_ratio - 1.0 / detail::mu(in)); }},
  {Stat::SD, Regime::III, "(n/b)(SD - d/(n mu) + mu)",         [](const CellInputs& in) { const double n = detail::nn(in), mu = detail::mu(in); return n / in.row.b * (in.s.sd - in.row.d / (n * mu) + mu); }},
  {Stat::T2, Regime::III, "(n c(n)^2/b)(1/c(n) - t^2/n)",      [](const CellInputs& in) { const double c = detail::c_moving(in), n = detail::nn(in); return n * c * c / in.row.b * (1.0 / c - detail::need_t2(in.s) / n); }},

  {Stat::T,  Regime::IV,  "(n/b)(nT - mu2/mu^2)",              [](const CellInputs& in) { const double n = detail::nn(in), mu = detail::mu(in); return n / in.row.b * (n * in.s.t_ratio - detail::mu2(in) / (mu * mu)); }},
  {Stat::SV, Regime::IV,  "(n/b)(SV - sigma/mu)",              [](const CellInputs& in) { return detail::nn(in) / in.row.b * (in.s.sv - std::sqrt(detail::sigma2(in)) / detail::mu(in)); }},
  {Stat::C,  Regime::IV,  "(n/b)(C - mu2/mu)",                 [](const CellInputs& in) { return detail::nn(in) / in.row.b * (in.s.c_ratio - detail::mu2(in) / detail::mu(in)); }},
  {Stat::SD, Regime::IV,  "(n/b)(SD - sigma^2/mu)",            [](const CellInputs& in) { return detail::nn(in) / in.row.b * (in.s.sd - detail::sigma2(in) / detail::mu(in)); }},
  {Stat::T2, Regime::IV,  "(n c^2/b)(1/c - t^2/n)",            [](const CellInputs& in) { const double c = detail::c_fixed(in), n = detail::nn(in); return n * c * c / in.row.b * (1.0 / c - detail::need_t2(in.s) / n); }},

  {Stat::T,  Regime::V,   "(n/b)(nT - mu2/mu^2)",              [](const CellInputs& in) { const double n = detail::nn(in), mu = detail::mu(in); return n / in.row.b * (n * in.s.t_ratio - detail::mu2(in) / (mu * mu)); }},
  {Stat::SV, Regime::V,   "(n/b)(SV - sigma/mu)",              [](const CellInputs& in) { return detail::nn(in) / in.row.b * (in.s.sv - std::sqrt(detail::sigma2(in)) / detail::mu(in)); }},
  {Stat::C,  Regime::V,   "(n/b)(C - mu2/mu)",                 [](const CellInputs& in) { return detail::nn(in) / in.row.b * (in.s.c_ratio - detail::mu2(in) / detail::mu(in)); }},
  {Stat::SD, Regime::V,   "(n/b)(SD - sigma^2/mu)",            [](const CellInputs& in) { return detail::nn(in) / in.row.b * (in.s.sd - detail::sigma2(in) / detail::mu(in)); }},
  {Stat::T2, Regime::V,   "(n c^2/b)(1/c - t^2/n)",            [](const CellInputs& in) { const double c = detail::c_fixed(in), n = detail::nn(in); return n * c * c / in.row.b * (1.0 / c - detail::need_t2(in.s) / n); }},
}};
// clang-format on

inline const LhsEntry& lhs_entry(Stat stat, Regime regime) {
  for (const auto& e : kLhsTable)
    if (e.stat == stat && e.regime == regime) return e;
  fail(ErrorCategory::undefined_cell, "no left-hand side for this cell");
}

inline double normalized_statistic(Stat stat, Regime regime, const SampleStats& s, const NormalizerRow& row,
                                   const MomentTable& m) {
  require(row.n == s.n, "normalized_statistic: normalizers were computed for a different n");
  return lhs_entry(stat, regime).fn(CellInputs{s, row, m});
}

inline double normalized_statistic(Stat stat, Regime regime, std::span<const double> data, const NormalizerRow& row,
                                   const MomentTable& m) {
  return normalized_statistic(stat, regime, compute_stats(data), row, m);
}

}  // namespace domattr
