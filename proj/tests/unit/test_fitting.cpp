#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sfmb/fitting.hpp"

using namespace sfmb;

namespace {

struct Case {
  FitFamily family;
  std::vector<double> truth;
  double lo, hi;
  bool log_x;
};

const std::vector<Case>& cases() {
  static const std::vector<Case> c{
      {FitFamily::exp_gain, {2.0, 0.02}, 10.0, 500.0, false},
      {FitFamily::power2, {3e-3}, 1000.0, 3000.0, false},
      {FitFamily::power_law, {1e-3, 2.4}, 10.0, 3000.0, true},
      {FitFamily::delay_law, {21.0, 0.2}, 100.0, 5000.0, true},
      {FitFamily::pump_decay, {0.7, 0.08}, 1.0, 60.0, false},
      {FitFamily::exp_linear, {1.0, 2.0, 0.1, 0.01}, 0.0, 100.0, false},
  };
  return c;
}

std::vector<double> grid(const Case& c, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    x[i] = c.log_x ? c.lo * std::pow(c.hi / c.lo, f) : c.lo + (c.hi - c.lo) * f;
  }
  return x;
}

std::vector<double> sample(const Case& c, const std::vector<double>& x) {
  std::vector<double> y;
  for (double v : x) y.push_back(evaluate(c.family, c.truth, v));
  return y;
}

}  // namespace

TEST(Fit, ExactDataRecoversCoefficients) {
  for (const Case& c : cases()) {
    const auto x = grid(c, 12);
    const auto y = sample(c, x);
    // Start away from the truth so the iteration does the work.
    std::vector<double> start = c.truth;
    for (double& v : start) v *= 1.3;
    const FitResult r = fit(c.family, x, y, start);
    ASSERT_TRUE(r.converged) << family_name(c.family) << ": " << r.message;
    for (std::size_t k = 0; k < c.truth.size(); ++k) {
      EXPECT_NEAR(r.coefficients[k] / c.truth[k], 1.0, 1e-6) << family_name(c.family) << " coefficient " << k;
    }
    const FitResult g = fit(c.family, x, y);
    for (std::size_t k = 0; k < c.truth.size(); ++k) {
      EXPECT_NEAR(g.coefficients[k] / c.truth[k], 1.0, 1e-6) << family_name(c.family) << " default guess " << k;
    }
  }
}

TEST(Fit, NoisyDataRecoveryRate) {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  for (const Case& c : cases()) {
    const auto x = grid(c, 50);
    const auto clean = sample(c, x);
    int good = 0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> y(clean);
      for (double& v : y) v *= 1.0 + 0.05 * normal(rng);
      // Multiplicative noise: fit in log space and judge by the reported errors.
      const FitResult r = fit(c.family, x, y, {}, {.log_residuals = true});
      bool ok = r.converged;
      for (std::size_t k = 0; k < c.truth.size(); ++k) {
        ok = ok && std::abs(r.coefficients[k] - c.truth[k]) <= 4.0 * r.standard_errors[k];
      }
      good += ok;
    }
    EXPECT_GE(good, 95) << family_name(c.family);
  }
}

TEST(Fit, ResidualNeverIncreases) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (const Case& c : cases()) {
    const auto x = grid(c, 30);
    auto y = sample(c, x);
    for (double& v : y) v *= 1.0 + 0.05 * normal(rng);
    std::vector<double> start = c.truth;
    for (double& v : start) v *= 0.6;
    const FitResult r = fit(c.family, x, y, start);
    ASSERT_GE(r.rss_history.size(), 1u);
    for (std::size_t i = 1; i < r.rss_history.size(); ++i) {
      EXPECT_LE(r.rss_history[i], r.rss_history[i - 1]) << family_name(c.family);
    }
    EXPECT_GE(r.rss, 0.0);
  }
}

TEST(Fit, Deterministic) {
  const Case& c = cases()[0];
  const auto x = grid(c, 20);
  auto y = sample(c, x);
  y[3] *= 1.1;
  const FitResult a = fit(c.family, x, y);
  const FitResult b = fit(c.family, x, y);
  EXPECT_EQ(a.coefficients, b.coefficients);
  EXPECT_EQ(a.rss, b.rss);
}

TEST(Fit, LogResidualsFitShapeOverDecades) {
  std::vector<double> x, y;
  for (double v = 100; v <= 3000; v += 100) {
    x.push_back(v);
    y.push_back(5e-4 * std::pow(v, 2.2));
  }
  const FitResult r = fit(FitFamily::power_law, x, y, {}, {.log_residuals = true});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.coefficients[1], 2.2, 1e-9);
  EXPECT_LT(r.rss, 1e-20);
}

TEST(Fit, StandardErrorsShrinkWithNoise) {
  const Case& c = cases()[4];
  const auto x = grid(c, 40);
  auto y = sample(c, x);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  auto noisy = y;
  for (double& v : noisy) v *= 1.0 + 0.01 * normal(rng);
  const FitResult r = fit(c.family, x, noisy);
  ASSERT_TRUE(r.converged);
  EXPECT_GT(r.standard_errors[1], 0.0);
  EXPECT_LT(r.standard_errors[1], 0.01 * c.truth[1] * 5);
}

TEST(Fit, PreconditionsRaise) {
  EXPECT_THROW(fit(FitFamily::exp_gain, std::vector<double>{1, 2}, std::vector<double>{1, 2}), FitError);
  EXPECT_THROW(fit(FitFamily::power2, std::vector<double>{1, 2}, std::vector<double>{1, NAN}), FitError);
  EXPECT_THROW(fit(FitFamily::power_law, std::vector<double>{-1, 2, 3}, std::vector<double>{1, 2, 3}), FitError);
  EXPECT_THROW(fit(FitFamily::exp_gain, std::vector<double>{1, 2, 3}, std::vector<double>{1, -2, 3}, {},
                   {.log_residuals = true}),
               FitError);
  EXPECT_THROW(family_from_name("cubic"), FitError);
}

TEST(Fit, DegenerateDataIsFlagged) {
  // All x equal: the exponential rate is not identifiable.
  const std::vector<double> x(6, 2.0);
  const std::vector<double> y{1.0, 1.1, 0.9, 1.0, 1.05, 0.95};
  const FitResult r = fit(FitFamily::exp_gain, x, y);
  EXPECT_FALSE(r.converged);
  EXPECT_FALSE(r.message.empty());
}

TEST(Fit, FamilyNamesRoundTrip) {
  for (const Case& c : cases()) EXPECT_EQ(family_from_name(family_name(c.family)), c.family);
}
