#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "domattr/statistics.hpp"
#include "oracles.hpp"

using namespace domattr;

namespace {

std::vector<double> random_positive(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(2, 400), kind(0, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(len(rng));
  const int k = kind(rng);
  for (double& x : xs) {
    const double v = u(rng);
    x = k == 0 ? v + 1e-3 : k == 1 ? -std::log1p(-v) + 1e-9 : std::pow(1.0 - v, -1.0 / 0.7);
  }
  return xs;
}

NormalizerRow row_for(std::size_t n, double a, double b, double c, double d, double ms, Regime r) {
  return {static_cast<std::uint64_t>(n), a, b, c, d, ms, r};
}

}  // namespace

TEST(Stat, RoundTrip) {
  for (Stat s : kAllStats) EXPECT_EQ(parse_stat(to_string(s)), s);
  EXPECT_THROW(parse_stat("Q"), Error);
}

TEST(ComputeStats, OneTwoThree) {
  const std::vector<double> xs{1, 2, 3};
  const auto s = compute_stats(xs);
  EXPECT_EQ(s.n, 3u);
  EXPECT_EQ(s.sum, 6.0);
  EXPECT_EQ(s.sum_sq, 14.0);
  EXPECT_NEAR(s.t_ratio, 14.0 / 36.0, 1e-16);
  EXPECT_NEAR(s.c_ratio, 14.0 / 6.0, 1e-15);
  EXPECT_NEAR(s.excess, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(s.sv, std::sqrt(1.0 / 6.0), 1e-15);
  EXPECT_NEAR(s.sd, 1.0 / 3.0, 1e-15);
  ASSERT_TRUE(s.t2.has_value());
  EXPECT_NEAR(*s.t2, 18.0, 1e-12);
  EXPECT_FALSE(s.degenerate);
}

TEST(ComputeStats, ConstantSampleIsDegenerate) {
  for (double c : {0.1, 1.0, 7.3}) {
    const std::vector<double> xs(5, c);
    const auto s = compute_stats(xs);
    EXPECT_NEAR(s.t_ratio, 0.2, 1e-16);
    EXPECT_EQ(s.excess, 0.0);
    EXPECT_EQ(s.sv, 0.0);
    EXPECT_EQ(s.sd, 0.0);
    EXPECT_FALSE(s.t2.has_value());
    EXPECT_TRUE(s.degenerate);
  }
}

TEST(ComputeStats, BinaryData) {
  // For 0/1 data the sum of squares equals the sum, so n T = 1 / mean.
  const std::vector<double> xs{1, 0, 0, 1, 1, 0, 0, 0, 1, 0};
  const auto s = compute_stats(xs);
  EXPECT_NEAR(s.n * s.t_ratio, 1.0 / s.mean(), 1e-15);
}

TEST(ComputeStats, Errors) {
  EXPECT_THROW(compute_stats(std::vector<double>{}), Error);
  try {
    compute_stats(std::vector<double>{0, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::all_zero_sample);
  }
  EXPECT_THROW(compute_stats(std::vector<double>{1, -1}), Error);
  EXPECT_THROW(compute_stats(std::vector<double>{1, NAN}), Error);
}

TEST(ComputeStats, IdentitiesOnRandomVectors) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto xs = random_positive(rng);
    const auto s = compute_stats(xs);
    const double n = xs.size();
    const double nt = n * s.t_ratio;
    EXPECT_LT(oracle::rel_err(s.sv * s.sv + 1.0, nt), 1e-12);
    EXPECT_LT(oracle::rel_err(s.sd, (nt - 1.0) * s.sum / n), 1e-12);
    ASSERT_TRUE(s.t2.has_value());
    EXPECT_LT(oracle::rel_err(*s.t2 * (nt - 1.0), n), 1e-12);
    EXPECT_GE(s.t_ratio, 1.0 / n * (1 - 1e-15));
    EXPECT_LE(s.t_ratio, 1.0);
    // SD is also C minus the mean.
    EXPECT_LT(oracle::rel_err(s.sd, s.c_ratio - s.mean()), 1e-10);
  }
}

TEST(ComputeStats, ScaleBehaviour) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto xs = random_positive(rng);
    const auto a = compute_stats(xs);
    for (double& x : xs) x *= 7.0;
    const auto b = compute_stats(xs);
    EXPECT_LT(oracle::rel_err(b.t_ratio, a.t_ratio), 1e-13);
    EXPECT_LT(oracle::rel_err(b.sv, a.sv), 1e-12);
    EXPECT_LT(oracle::rel_err(b.c_ratio, 7.0 * a.c_ratio), 1e-13);
    EXPECT_LT(oracle::rel_err(b.sd, 7.0 * a.sd), 1e-12);
    EXPECT_LT(oracle::rel_err(*b.t2, *a.t2), 1e-12);
  }
}

TEST(ComputeStats, PermutationInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto xs = random_positive(rng);
    const auto a = compute_stats(xs);
    std::shuffle(xs.begin(), xs.end(), rng);
    const auto b = compute_stats(xs);
    EXPECT_LT(oracle::rel_err(b.t_ratio, a.t_ratio), 1e-14);
    EXPECT_LT(oracle::rel_err(b.sv, a.sv), 1e-13);
    EXPECT_LT(oracle::rel_err(*b.t2, *a.t2), 1e-13);
  }
}

TEST(ComputeStats, WideDynamicRange) {
  // One huge value and many unit values: naive summation drops the units.
  std::vector<double> xs(100000, 1.0);
  xs[0] = 1e17;
  const auto s = compute_stats(xs);
  EXPECT_EQ(s.sum, 1e17 + 99999.0);
}

TEST(LhsTable, Complete) {
  std::set<std::pair<int, int>> seen;
  for (const auto& e : kLhsTable) {
    EXPECT_TRUE(seen.emplace(static_cast<int>(e.stat), static_cast<int>(e.regime)).second);
    EXPECT_FALSE(e.formula.empty());
  }
  EXPECT_EQ(seen.size(), 25u);
  for (Stat s : kAllStats)
    for (Regime r : {Regime::I, Regime::II, Regime::III, Regime::IV, Regime::V}) EXPECT_NO_THROW(lhs_entry(s, r));
}

TEST(NormalizedStatistic, RegimeOneIsUnnormalizedForRatios) {
  const std::vector<double> xs{1, 2, 3};
  const auto m = moments(DistributionModel::pareto(0.5));
  const auto row = row_for(3, 9.0, 81.0, 0, 0, 0, Regime::I);
  EXPECT_NEAR(normalized_statistic(Stat::T, Regime::I, xs, row, m), 14.0 / 36.0, 1e-16);
  EXPECT_NEAR(normalized_statistic(Stat::T2, Regime::I, xs, row, m), 18.0, 1e-12);
  EXPECT_NEAR(normalized_statistic(Stat::SV, Regime::I, xs, row, m), std::sqrt(1.0 / 6.0) / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(normalized_statistic(Stat::C, Regime::I, xs, row, m), 14.0 / 6.0 / 9.0, 1e-15);
}

TEST(NormalizedStatistic, HandComputedCells) {
  const std::vector<double> xs{1.0, 2.0, 4.0, 1.5};
  const double n = 4, sum = 8.5, sum_sq = 1 + 4 + 16 + 2.25;
  const double nt = n * sum_sq / (sum * sum);
  const double sv = std::sqrt(nt - 1), c = sum_sq / sum, sd = c - sum / n, t2 = n / (nt - 1);

  // Regime IV with Pareto(3): mu = 3/2, mu2 = 3, sigma^2 = 3/4.
  const auto m3 = moments(DistributionModel::pareto(3.0));
  const auto row4 = row_for(4, 2.0, 2.5, 6.0, 12.0, 5.0, Regime::IV);
  EXPECT_NEAR(normalized_statistic(Stat::SV, Regime::IV, xs, row4, m3), (4 / 2.5) * (sv - std::sqrt(0.75) / 1.5), 1e-13);
  EXPECT_NEAR(normalized_statistic(Stat::T, Regime::IV, xs, row4, m3), (4 / 2.5) * (nt - 3 / 2.25), 1e-13);
  EXPECT_NEAR(normalized_statistic(Stat::C, Regime::IV, xs, row4, m3), (4 / 2.5) * (c - 2.0), 1e-13);
  EXPECT_NEAR(normalized_statistic(Stat::SD, Regime::IV, xs, row4, m3), (4 / 2.5) * (sd - 0.5), 1e-13);
  const double cc = 0.75 / 2.25;
  EXPECT_NEAR(normalized_statistic(Stat::T2, Regime::IV, xs, row4, m3), 4 * cc * cc / 2.5 * (1 / cc - t2 / 4), 1e-13);

  // Regime III with Pareto(2): mu = 2, d = 30, b = 4, so c(n) = 30/16 - 1.
  const auto m2 = moments(DistributionModel::pareto(2.0));
  const auto row3 = row_for(4, 3.0, 4.0, 8.0, 30.0, 7.0, Regime::III);
  const double cn = 30.0 / 16.0 - 1.0;
  EXPECT_NEAR(normalized_statistic(Stat::T, Regime::III, xs, row3, m2), (4 / 4.0) * (nt - 30.0 / 16.0), 1e-13);
  EXPECT_NEAR(normalized_statistic(Stat::SV, Regime::III, xs, row3, m2), 4 * std::sqrt(cn) / 4.0 * (sv - std::sqrt(cn)), 1e-13);
  EXPECT_NEAR(normalized_statistic(Stat::C, Regime::III, xs, row3, m2), 30.0 / 4.0 * (4 / 30.0 * c - 0.5), 1e-13);
  EXPECT_NEAR(normalized_statistic(Stat::SD, Regime::III, xs, row3, m2), (4 / 4.0) * (sd - 30.0 / 8.0 + 2.0), 1e-13);
  EXPECT_NEAR(normalized_statistic(Stat::T2, Regime::III, xs, row3, m2), 4 * cn * cn / 4.0 * (1 / cn - t2 / 4), 1e-13);

  // Regime II: ms = 10, a = 3.
  const auto m15 = moments(DistributionModel::pareto(1.5));
  const auto row2 = row_for(4, 3.0, 9.0, 12.0, 0.0, 10.0, Regime::II);
  EXPECT_NEAR(normalized_statistic(Stat::T, Regime::II, xs, row2, m15), 100.0 / 9.0 * sum_sq / (sum * sum), 1e-13);
  EXPECT_NEAR(normalized_statistic(Stat::SV, Regime::II, xs, row2, m15), 10.0 / (2.0 * 3.0) * sv, 1e-13);
  EXPECT_NEAR(normalized_statistic(Stat::C, Regime::II, xs, row2, m15), 10.0 / 9.0 * c, 1e-13);
  EXPECT_NEAR(normalized_statistic(Stat::SD, Regime::II, xs, row2, m15), 10.0 / 9.0 * sd, 1e-13);
  EXPECT_NEAR(normalized_statistic(Stat::T2, Regime::II, xs, row2, m15), 9.0 / 100.0 * t2, 1e-13);
}

TEST(NormalizedStatistic, UndefinedCells) {
  const std::vector<double> flat(4, 2.0);
  const auto m = moments(DistributionModel::exponential(1.0));
  const auto row = row_for(4, 2.0, 10.0, 4.0, 8.0, 4.0, Regime::V);
  try {
    normalized_statistic(Stat::T2, Regime::V, flat, row, m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::undefined_cell);
  }
  EXPECT_NO_THROW(normalized_statistic(Stat::T, Regime::V, flat, row, m));
  // sigma = 0 (point mass) leaves the t^2 centering undefined.
  const std::vector<double> xs{1, 2};
  const auto point = moments(DistributionModel::bernoulli(1.0));
  EXPECT_THROW(normalized_statistic(Stat::T2, Regime::V, xs, row_for(2, 1, 1, 2, 2, 2, Regime::V), point), Error);
  // Finite-moment cells reject infinite moments.
  EXPECT_THROW(normalized_statistic(Stat::T, Regime::IV, xs, row_for(2, 1, 1, 2, 2, 2, Regime::IV),
                                    moments(DistributionModel::pareto(1.5))),
               Error);
  // Mismatched n.
  EXPECT_THROW(normalized_statistic(Stat::T, Regime::V, xs, row, m), Error);
}
