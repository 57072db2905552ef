#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "domattr/limit_laws.hpp"
#include "domattr/normalizers.hpp"
#include "domattr/statistics.hpp"

namespace domattr {

/// Pointwise map applied to draws of the reference law before scaling.
enum class Transform { identity, sqrt, reciprocal };

/// One (statistic, regime) pairing: the normalized statistic on the left and
/// the law it converges to on the right, as scale * transform(law).
struct TheoremCell {
  Stat stat;
  Regime regime;
  const LhsEntry* lhs;
  LimitLaw law;
  Transform transform = Transform::identity;
  double scale = 1.0;
  std::string rhs;  ///< human-readable limit, in terms of Y1, Y2
};

namespace detail {

inline RatioKind ratio_for(Stat stat) {
  switch (stat) {
    case Stat::T: return RatioKind::y2_over_y1_sq;
    case Stat::SV: return RatioKind::sqrt_y2_over_y1;
    case Stat::C:
    case Stat::SD: return RatioKind::y2_over_y1;
    case Stat::T2: return RatioKind::y1_sq_over_y2;
  }
  return RatioKind::y2_over_y1_sq;
}

}  // namespace detail

inline TheoremCell build_cell(Stat stat, const DistributionModel& model) {
  const Regime regime = classify(model);
  const MomentTable m = moments(model);
  TheoremCell cell{stat, regime, &lhs_entry(stat, regime), DegenerateLaw{0.0}, Transform::identity, 1.0, {}};

  switch (regime) {
    case Regime::I: {
      const double alpha = model.tail_index().value();
      cell.law = RatioLaw{alpha, detail::ratio_for(stat)};
      const char* f[] = {"Y2/Y1^2", "Y2/Y1", "sqrt(Y2)/Y1", "Y2/Y1", "Y1^2/Y2"};
      cell.rhs = std::string(f[static_cast<int>(stat)]) + ", (Y1, Y2) = (Y1(alpha), Y2(alpha/2)) jointly";
      return cell;
    }
    case Regime::II: {
      // The sum of X over n m(a(n)) tends to 1, leaving only Y2(alpha/2).
      cell.law = StableLaw{model.tail_index().value() / 2.0};
      if (stat == Stat::SV) cell.transform = Transform::sqrt;
      if (stat == Stat::T2) cell.transform = Transform::reciprocal;
      const char* f[] = {"Y2", "Y2", "sqrt(Y2)", "Y2", "1/Y2"};
      cell.rhs = std::string(f[static_cast<int>(stat)]) + ", Y2 = Y2(alpha/2)";
      return cell;
    }
    case Regime::III:
    case Regime::IV: {
      const double mu = m.mu.value();
      const double index = regime == Regime::III ? 1.0 : model.tail_index().value() / 2.0;
      cell.law = StableLaw{index};
      switch (stat) {
        case Stat::T:
        case Stat::T2: cell.scale = 1.0 / (mu * mu); cell.rhs = "Y2/mu^2"; break;
        case Stat::C:
        case Stat::SD: cell.scale = 1.0 / mu; cell.rhs = "Y2/mu"; break;
        case Stat::SV:
          if (regime == Regime::III) {
            cell.scale = 1.0 / (2.0 * mu * mu);
            cell.rhs = "Y2/(2 mu^2)";
          } else {
            cell.scale = 1.0 / (2.0 * std::sqrt(m.sigma2.value()) * mu);
            cell.rhs = "Y2/(2 sigma mu)";
          }
          break;
      }
      cell.rhs += regime == Regime::III ? ", Y2 = Y2(1)" : ", Y2 = Y2(alpha/2)";
      return cell;
    }
    case Regime::V: {
      if (!(m.sigma2.value() > 0.0))
        fail(ErrorCategory::unsupported_regime, "a point mass has no nondegenerate limit: " + to_spec(model));
      switch (stat) {
        case Stat::T:
        case Stat::T2: cell.law = CompositeLaw{CompositeKind::t_ratio, m}; break;
        case Stat::SV:
          cell.law = CompositeLaw{CompositeKind::t_ratio, m};
          cell.scale = m.mu.value() / (2.0 * std::sqrt(m.sigma2.value()));
          break;
        case Stat::C: cell.law = CompositeLaw{CompositeKind::c_ratio, m}; break;
        case Stat::SD: cell.law = CompositeLaw{CompositeKind::dispersion, m}; break;
      }
      cell.rhs = (cell.scale != 1.0 ? format_double(cell.scale) + " * " : std::string()) + describe(cell.law);
      return cell;
    }
  }
  fail(ErrorCategory::unsupported_regime, "unsupported regime for " + to_spec(model));
}

/// Draws from the cell's limit law, with transform and scale applied.
inline std::vector<double> reference_sample(const TheoremCell& cell, std::size_t count, std::uint64_t seed,
                                            unsigned threads = 1) {
  require(count >= 1, "reference_sample: count must be positive");
  std::vector<double> out = sample_law(cell.law, count, seed, threads);
  for (double& x : out) {
    if (cell.transform == Transform::sqrt) x = std::sqrt(x);
    else if (cell.transform == Transform::reciprocal) x = 1.0 / x;
    x *= cell.scale;
  }
  return out;
}

/// The cell's normalized statistic for one sample.
inline double cell_statistic(const TheoremCell& cell, std::span<const double> data, const NormalizerRow& row,
                             const MomentTable& m) {
  return normalized_statistic(cell.stat, cell.regime, data, row, m);
}

}  // namespace domattr
