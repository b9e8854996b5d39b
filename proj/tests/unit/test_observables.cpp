#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "sfmb/observables.hpp"

using namespace sfmb;

namespace {

std::vector<cplx> chirped_pulse(std::size_t n, double dt, double center) {
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt - center;
    v[i] = std::exp(-t * t / 0.02) * std::exp(cplx(0.0, 3.0 * t + 20.0 * t * t));
  }
  return v;
}

}  // namespace

TEST(PulseArea, ZeroSeries) { EXPECT_EQ(pulse_area(std::vector<cplx>(50), 0.1), 0.0); }

TEST(PulseArea, ScalesLinearly) {
  const auto v = chirped_pulse(400, 0.005, 1.0);
  std::vector<cplx> w(v);
  for (auto& x : w) x *= 3.5;
  EXPECT_NEAR(pulse_area(w, 0.005), 3.5 * pulse_area(v, 0.005), 1e-12);
}

TEST(PulseArea, GaussianPiHalf) {
  // Omega0 sqrt(pi) kappa tau2 = pi / 2 with kappa = ln 2, tau2 = 1 ps.
  const double width = std::log(2.0);
  const double amp = std::sqrt(std::numbers::pi) / (2.0 * width);
  const double dt = 1e-3;
  std::vector<cplx> v;
  for (double t = -6.0; t <= 6.0; t += dt) v.emplace_back(amp * std::exp(-(t / width) * (t / width)));
  EXPECT_NEAR(pulse_area(v, dt), std::numbers::pi / 2.0, 1e-3 * std::numbers::pi / 2.0);
}

TEST(SpectrumTest, Parseval) {
  const double dt = 0.004;
  const auto v = chirped_pulse(1000, dt, 2.0);
  const Spectrum s = spectrum(v, dt);
  double time_side = 0.0;
  for (const auto& x : v) time_side += std::norm(x);
  time_side *= dt;
  const double freq_side = std::accumulate(s.intensity.begin(), s.intensity.end(), 0.0) * s.bin_width /
                           (2.0 * std::numbers::pi);
  EXPECT_NEAR(freq_side / time_side, 1.0, 1e-3);
}

TEST(SpectrumTest, AxisAndResolution) {
  const double dt = 0.01;
  const Spectrum s = spectrum(std::vector<cplx>(256, cplx{1.0}), dt);
  ASSERT_EQ(s.detuning.size(), 1024u);
  EXPECT_NEAR(s.resolution, 2.0 * std::numbers::pi / (256 * dt), 1e-12);
  EXPECT_NEAR(s.bin_width, s.resolution / 4.0, 1e-12);
  for (std::size_t i = 1; i < s.detuning.size(); ++i) EXPECT_GT(s.detuning[i], s.detuning[i - 1]);
  // A constant envelope sits at zero detuning.
  const auto peak = argmax_earliest(s.intensity);
  EXPECT_EQ(s.detuning[*peak], 0.0);
}

TEST(SpectrumTest, PositiveDetuningForExpMinusIwt) {
  // Kernel e^{+i w t}: an envelope e^{-i w0 t} peaks at +w0.
  const double dt = 0.01, w0 = 12.0;
  std::vector<cplx> v(512);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(cplx(0.0, -w0 * static_cast<double>(i) * dt));
  const Spectrum s = spectrum(v, dt);
  EXPECT_NEAR(s.detuning[*argmax_earliest(s.intensity)], w0, s.bin_width);
}

TEST(SpectrumTest, TimeShiftInvariant) {
  const double dt = 0.004;
  const auto a = chirped_pulse(1000, dt, 1.2);
  std::vector<cplx> b(1000);
  std::copy(a.begin(), a.end() - 150, b.begin() + 150);  // delay by 150 samples
  const Spectrum sa = spectrum(a, dt), sb = spectrum(b, dt);
  const double peak = *std::max_element(sa.intensity.begin(), sa.intensity.end());
  for (std::size_t i = 0; i < sa.intensity.size(); ++i) EXPECT_NEAR(sa.intensity[i], sb.intensity[i], 1e-9 * peak);
}

TEST(Delay, ProportionalProfilesGiveZero) {
  std::vector<double> t(300), jp(300);
  std::vector<cplx> w(300);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = 0.01 * static_cast<double>(i);
    jp[i] = std::exp(-std::pow((t[i] - 1.3) / 0.2, 2));
    w[i] = 1e-3 * std::sqrt(jp[i]);
  }
  EXPECT_EQ(*delay_time(t, w, jp), 0.0);
}

TEST(Delay, MissingForZeroField) {
  std::vector<double> t{0, 1, 2}, jp{0, 1, 0};
  EXPECT_FALSE(delay_time(t, std::vector<cplx>(3), jp).has_value());
}

TEST(Delay, TiesBreakToEarliest) {
  std::vector<double> t{0, 1, 2, 3}, jp{0, 1, 0, 0};
  std::vector<cplx> w{0.0, 0.0, 2.0, 2.0};
  EXPECT_EQ(*delay_time(t, w, jp), 1.0);
}

TEST(HistogramTest, CountsSumToInputs) {
  std::vector<double> v{-1, 0, 0.5, 1, 1.5, 2, 9};
  const Histogram h = histogram(v, linear_edges(0.0, 2.0, 4));
  EXPECT_EQ(h.total(), v.size());
  EXPECT_EQ(h.edges.size(), 5u);
  EXPECT_EQ(h.counts.front(), 2u);  // -1 clamped, 0
  EXPECT_EQ(h.counts.back(), 3u);   // 1.5, 2, 9 clamped
}

TEST(HistogramTest, EqualValuesOccupyOneBin) {
  const Histogram h = photon_histogram(std::vector<double>(17, 3e8));
  std::size_t occupied = 0;
  for (auto c : h.counts) occupied += c > 0;
  EXPECT_EQ(occupied, 1u);
  EXPECT_EQ(h.total(), 17u);
  EXPECT_EQ(h.counts.size(), 30u);
}

TEST(HistogramTest, PhotonBinsAreLogarithmic) {
  const Histogram h = photon_histogram(std::vector<double>{1e3, 1e6, 5e4, 1e9});
  EXPECT_EQ(h.counts.size(), 30u);
  const double ratio = h.edges[1] / h.edges[0];
  for (std::size_t i = 2; i + 1 < h.edges.size(); ++i) EXPECT_NEAR(h.edges[i] / h.edges[i - 1], ratio, 1e-9);
  EXPECT_EQ(h.counts.back(), 1u);
  EXPECT_EQ(h.counts.front(), 1u);
}

TEST(Maxima, DistinctMaximaIgnoreJitter) {
  std::vector<double> v;
  for (int i = 0; i < 400; ++i) {
    const double t = i * 0.01;
    v.push_back(std::exp(-std::pow((t - 1.0) / 0.2, 2)) + 0.6 * std::exp(-std::pow((t - 2.5) / 0.2, 2)) +
                1e-3 * ((i % 2) ? 1.0 : -1.0));
  }
  EXPECT_GT(prominent_maxima(v, 0.5).size(), 2u);
  EXPECT_EQ(distinct_maxima(v, 0.5, 0.05).size(), 2u);
  EXPECT_EQ(distinct_maxima(v, 0.7, 0.05).size(), 1u);
}

TEST(Maxima, SplitSpectrumDetection) {
  Spectrum s;
  for (int i = -200; i <= 200; ++i) {
    const double w = i * 0.1;
    s.detuning.push_back(w);
    s.intensity.push_back(std::exp(-std::pow((w - 5) / 1.0, 2)) + std::exp(-std::pow((w + 5) / 1.0, 2)));
  }
  s.resolution = 0.4;
  EXPECT_TRUE(spectrum_is_split(s, 0.5, 3 * s.resolution));
  EXPECT_FALSE(spectrum_is_split(s, 0.5, 30 * s.resolution));
}
