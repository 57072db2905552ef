#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "domattr/dist_models.hpp"
#include "oracles.hpp"

using namespace domattr;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<DistributionModel> all_models() {
  return {DistributionModel::pareto(0.5),     DistributionModel::pareto(1.0),
          DistributionModel::pareto(2.0),     DistributionModel::pareto(3.0),
          DistributionModel::pareto(4.5),     DistributionModel::pareto_log(1.5),
          DistributionModel::pareto_log(2.0), DistributionModel::bernoulli(0.3),
          DistributionModel::exponential(1.0), DistributionModel::exponential(2.5)};
}

std::vector<double> log_grid(double lo_exp, double hi_exp, double step) {
  std::vector<double> xs;
  for (double e = lo_exp; e <= hi_exp + 1e-12; e += step) xs.push_back(std::pow(10.0, e));
  return xs;
}

}  // namespace

TEST(Tail, Examples) {
  EXPECT_DOUBLE_EQ(tail(DistributionModel::pareto(0.5), 4.0), 0.5);
  EXPECT_DOUBLE_EQ(tail(DistributionModel::pareto(3.0), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(tail(DistributionModel::bernoulli(0.3), 0.5), 0.3);
  EXPECT_DOUBLE_EQ(tail(DistributionModel::pareto(2.0), 0.0), 1.0);
  EXPECT_THROW(tail(DistributionModel::pareto(2.0), -1.0), Error);
}

TEST(Tail, MonotoneAndBounded) {
  for (const auto& model : all_models()) {
    double prev = tail(model, 0.0);
    EXPECT_LE(prev, 1.0);
    for (double x : log_grid(-3, 6, 0.05)) {
      const double t = tail(model, x);
      EXPECT_GE(t, 0.0);
      EXPECT_LE(t, prev) << to_spec(model) << " x=" << x;
      prev = t;
    }
  }
}

TEST(Tail, ParetoRegularVariationIsExact) {
  for (double alpha : {0.3, 1.0, 2.0, 3.7}) {
    const auto model = DistributionModel::pareto(alpha);
    for (double t : {1.0, 3.5, 1e3, 1e9}) {
      EXPECT_NEAR(tail(model, 2.0 * t) / tail(model, t), std::pow(2.0, -alpha), 1e-15);
    }
  }
}

TEST(Quantile, InvertsCdfOnSupport) {
  for (const auto& model : {DistributionModel::pareto(0.5), DistributionModel::pareto(3.0),
                            DistributionModel::pareto_log(1.5), DistributionModel::pareto_log(4.0),
                            DistributionModel::exponential(1.0), DistributionModel::exponential(0.2)}) {
    // Stay where 1 - cdf(x) is representable to ~1e-11 relative (tail >= 1e-5).
    const double lo = model.is<Exponential>() ? 0.01 : 1.0;
    const double hi = quantile(model, 1.0 - 1e-5);
    for (double x = lo; x < hi; x *= 1.37) {
      EXPECT_LT(oracle::rel_err(quantile(model, cdf(model, x)), x), 1e-9) << to_spec(model) << " x=" << x;
    }
  }
  const auto b = DistributionModel::bernoulli(0.3);
  EXPECT_EQ(quantile(b, cdf(b, 0.0)), 0.0);
  EXPECT_EQ(quantile(b, cdf(b, 1.0)), 1.0);
}

TEST(TruncatedSecondMoment, Examples) {
  EXPECT_NEAR(truncated_second_moment(DistributionModel::pareto(2.0), std::numbers::e), 2.0, 1e-14);
  EXPECT_EQ(truncated_second_moment(DistributionModel::bernoulli(0.4), 0.5), 0.0);
  EXPECT_NEAR(truncated_second_moment(DistributionModel::exponential(1.0), kInf), 2.0, 1e-14);
  EXPECT_EQ(truncated_second_moment(DistributionModel::pareto(1.5), kInf), kInf);
}

TEST(IntegratedTail, Examples) {
  EXPECT_NEAR(integrated_tail(DistributionModel::pareto(1.0), std::numbers::e), 2.0, 1e-14);
  for (const auto& model : all_models()) EXPECT_EQ(integrated_tail(model, 0.0), 0.0);
  EXPECT_NEAR(integrated_tail(DistributionModel::pareto(3.0), kInf), 1.5, 1e-14);
}

TEST(SquaredFunctionals, Examples) {
  EXPECT_NEAR(squared_functionals(DistributionModel::pareto(2.0), std::numbers::e).m2, 2.0, 1e-14);
  EXPECT_NEAR(squared_functionals(DistributionModel::exponential(1.0), kInf).v2, 24.0, 1e-12);

  // V2(16) for Pareto(3): int_1^4 u^4 * 3u^-4 du, by an independent Simpson rule.
  const double expected = oracle::simpson([](double u) { return std::pow(u, 4) * 3.0 * std::pow(u, -4.0); }, 1.0, 4.0);
  EXPECT_NEAR(expected, 9.0, 1e-12);
  EXPECT_NEAR(squared_functionals(DistributionModel::pareto(3.0), 16.0).v2, expected, 1e-12);
}

TEST(Functionals, MonotoneInX) {
  for (const auto& model : all_models()) {
    double pv = 0.0, pm = 0.0, pm2 = 0.0, pv2 = 0.0;
    for (double x : log_grid(-2, 6, 0.25)) {
      const double v = truncated_second_moment(model, x);
      const double m = integrated_tail(model, x);
      const auto sq = squared_functionals(model, x);
      EXPECT_GE(v, pv - 1e-12 * std::abs(v)) << to_spec(model);
      EXPECT_GE(m, pm - 1e-12 * std::abs(m)) << to_spec(model);
      EXPECT_GE(sq.m2, pm2 - 1e-12 * std::abs(sq.m2)) << to_spec(model);
      EXPECT_GE(sq.v2, pv2 - 1e-12 * std::abs(sq.v2)) << to_spec(model);
      pv = v;
      pm = m;
      pm2 = sq.m2;
      pv2 = sq.v2;
    }
  }
}

TEST(Functionals, QuadratureAgreesWithClosedForms) {
  const std::vector<DistributionModel> closed = {
      DistributionModel::pareto(0.5), DistributionModel::pareto(1.0),    DistributionModel::pareto(2.0),
      DistributionModel::pareto(3.0), DistributionModel::pareto(4.0),    DistributionModel::pareto(4.5),
      DistributionModel::bernoulli(0.3), DistributionModel::exponential(1.0), DistributionModel::exponential(2.5)};
  const auto check = [](double got, double want, const std::string& what) {
    if (want == 0.0)
      EXPECT_LT(std::abs(got), 1e-12) << what;
    else
      EXPECT_LT(oracle::rel_err(got, want), 1e-8) << what << " got " << got << " want " << want;
  };
  for (const auto& model : closed) {
    for (double x : log_grid(-2, 8, 0.5)) {
      const std::string tag = to_spec(model) + " x=" + std::to_string(x);
      check(truncated_second_moment(model, x, Route::quadrature), truncated_second_moment(model, x), "V " + tag);
      check(integrated_tail(model, x, Route::quadrature), integrated_tail(model, x), "m " + tag);
      check(truncated_third_moment(model, x, Route::quadrature), truncated_third_moment(model, x), "W " + tag);
      const auto q = squared_functionals(model, x, Route::quadrature);
      const auto a = squared_functionals(model, x);
      check(q.m2, a.m2, "m2 " + tag);
      check(q.v2, a.v2, "V2 " + tag);
    }
  }
}

TEST(Functionals, ParetoLogAgainstIndependentQuadrature) {
  // V(x) = int_1^x y^2 f(y) dy with the density of the log-corrected tail.
  const double alpha = 1.5;
  const auto model = DistributionModel::pareto_log(alpha);
  const auto density = [alpha](double y) {
    const double l = 1.0 + std::log(y);
    return std::pow(y, -alpha - 1.0) * (alpha / l + 1.0 / (l * l));
  };
  for (double x : {2.0, 10.0, 100.0}) {
    const double want = oracle::simpson([&](double y) { return y * y * density(y); }, 1.0, x, 200000);
    EXPECT_LT(oracle::rel_err(truncated_second_moment(model, x), want), 1e-8);
  }
}

TEST(Functionals, TailToTruncatedMomentRatio) {
  // x^2 F-bar(x) / V(x) -> (2 - alpha)/alpha; for Pareto the relative gap is
  // exactly 1 / (x^(2-alpha) - 1), so 1e-3 at x = 1e6 is reachable only for alpha < 1.5.
  const double x = 1e6;
  for (double alpha : {0.5, 0.8, 1.0, 1.2}) {
    const auto model = DistributionModel::pareto(alpha);
    const double ratio = x * x * tail(model, x) / truncated_second_moment(model, x);
    EXPECT_LT(oracle::rel_err(ratio, (2.0 - alpha) / alpha), 1e-3) << alpha;
  }
  for (double alpha : {1.5, 1.8}) {
    const auto model = DistributionModel::pareto(alpha);
    const auto gap = [&](double at) {
      return oracle::rel_err(at * at * tail(model, at) / truncated_second_moment(model, at), (2.0 - alpha) / alpha);
    };
    EXPECT_NEAR(gap(x), 1.0 / (std::pow(x, 2.0 - alpha) - 1.0), 1e-9);
    EXPECT_LT(gap(1e12), gap(x));
  }
  // alpha = 2: the ratio is 1/(2 log x), decaying to 0 logarithmically.
  const auto p2 = DistributionModel::pareto(2.0);
  EXPECT_NEAR(x * x * tail(p2, x) / truncated_second_moment(p2, x), 1.0 / (2.0 * std::log(x)), 1e-12);
}

TEST(Moments, FinitenessFollowsTailIndex) {
  for (double alpha : {0.5, 1.0, 2.0, 2.5, 3.0, 4.0, 4.5}) {
    for (const auto& model : {DistributionModel::pareto(alpha), DistributionModel::pareto_log(alpha)}) {
      const auto m = moments(model);
      const ExtendedReal ks[] = {m.mu, m.mu2, m.mu3, m.mu4};
      for (int k = 1; k <= 4; ++k) EXPECT_EQ(ks[k - 1].is_infinite(), k >= alpha) << to_spec(model) << " k=" << k;
    }
  }
  for (const auto& model : {DistributionModel::bernoulli(0.3), DistributionModel::exponential(1.7)}) {
    const auto m = moments(model);
    EXPECT_TRUE(m.mu4.is_finite());
    EXPECT_GE(m.sigma2.value(), 0.0);
    EXPECT_LE(m.mu.value() * m.mu.value(), m.mu2.value());
    EXPECT_LE(m.mu2.value() * m.mu2.value(), m.mu4.value() * (1 + 1e-15));
  }
  const auto e = moments(DistributionModel::exponential(1.0));
  EXPECT_DOUBLE_EQ(e.mu3.value(), 6.0);
  EXPECT_DOUBLE_EQ(e.mu4.value(), 24.0);
}

TEST(Moments, ParetoLogMomentMatchesQuadrature) {
  const auto model = DistributionModel::pareto_log(3.0);
  // E X = int_0^inf F-bar
  EXPECT_LT(oracle::rel_err(moments(model).mu.value(), integrated_tail(model, kInf, Route::quadrature)), 1e-8);
  EXPECT_LT(oracle::rel_err(moments(model).mu2.value(), truncated_second_moment(model, kInf, Route::quadrature)), 1e-8);
}

TEST(Sample, DegenerateBernoulli) {
  EXPECT_EQ(sample(DistributionModel::bernoulli(1.0), 3, 12345), (std::vector<double>{1.0, 1.0, 1.0}));
}

TEST(Sample, Deterministic) {
  for (const auto& model : all_models()) {
    EXPECT_EQ(sample(model, 257, 99), sample(model, 257, 99));
    EXPECT_NE(sample(model, 257, 99), sample(model, 257, 100));
  }
}

TEST(Sample, SupportIsRespected) {
  for (const auto& model : all_models()) {
    const double lo = model.is<Pareto>() || model.is<ParetoLog>() ? 1.0 : 0.0;
    for (double x : sample(model, 10000, 7)) EXPECT_GE(x, lo);
  }
}

TEST(Sample, EmpiricalTailWithinBinomialBand) {
  const std::size_t n = 1'000'000;
  for (const auto& model : {DistributionModel::pareto(0.7), DistributionModel::pareto(2.5),
                            DistributionModel::pareto_log(1.5), DistributionModel::exponential(1.3)}) {
    const auto xs = sample(model, n, 2024);
    for (double x : {1.5, 3.0, 10.0}) {
      const double p = tail(model, x);
      std::size_t above = 0;
      for (double v : xs) above += v > x;
      const double se = std::sqrt(p * (1.0 - p) / n);
      EXPECT_LT(std::abs(static_cast<double>(above) / n - p), 3.0 * se) << to_spec(model) << " x=" << x;
    }
  }
}

TEST(ModelSpec, ParsesAndPrints) {
  EXPECT_EQ(to_spec(parse_model("pareto{alpha=1.5}")), "pareto{alpha=1.5}");
  EXPECT_EQ(to_spec(parse_model(" bernoulli{ p = 0.3 } ")), "bernoulli{p=0.3}");
  EXPECT_EQ(to_spec(parse_model("exp{rate=1}")), "exp{rate=1}");
  EXPECT_EQ(to_spec(parse_model("exp")), "exp{rate=1}");
  EXPECT_EQ(parse_model("paretolog{alpha=2}"), DistributionModel::pareto_log(2.0));
  EXPECT_THROW(parse_model("gamma{k=2}"), Error);
  EXPECT_THROW(parse_model("pareto{alpha=-1}"), Error);
  EXPECT_THROW(parse_model("pareto{beta=1}"), Error);
  EXPECT_THROW(parse_model("pareto{alpha=1"), Error);
  EXPECT_THROW(parse_model("bernoulli{p=1.5}"), Error);
}
