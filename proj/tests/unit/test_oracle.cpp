#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "presets.hpp"
#include "sfmb/observables.hpp"
#include "sfmb/oracle.hpp"

using namespace sfmb;

TEST(Oracle, ConsumptionShift) {
  const Scenario s = fixtures::preset("fig3a");
  EXPECT_NEAR(oracle::u_factor(s), 1.5648690356559622, 1e-12);
  EXPECT_NEAR(oracle::u_factor(s) * s.pump.duration, 0.0939, 1e-4);
}

TEST(Oracle, ConsumptionShiftSmallDoseLimit) {
  // u -> x/2 as the pump dose vanishes, without cancellation.
  Scenario s = fixtures::preset("fig3a");
  s.pump.photons = 1e-3;
  const double x = 4.0 * s.pump.photons * s.medium.sigma /
                   (std::numbers::e * std::pow(std::numbers::pi, 1.5) * s.medium.radius * s.medium.radius);
  EXPECT_NEAR(oracle::u_factor(s) / (x / 2.0), 1.0, 1e-9);
}

TEST(Oracle, GainExponentLimits) {
  const Scenario a = fixtures::preset("fig5");
  const Scenario b = fixtures::preset("fig6");
  EXPECT_NEAR(oracle::gain_estimate(a, PhysicalConstants::c).two_xi_limit, 0.055376714738391425, 1e-12);
  EXPECT_NEAR(oracle::gain_estimate(b, PhysicalConstants::c).two_xi_limit, 0.07647869482906297, 1e-12);
}

TEST(Oracle, GainEstimateApproachesLimitContinuously) {
  const Scenario s = fixtures::preset("fig5");
  const double c = PhysicalConstants::c;
  const auto limit = oracle::gain_estimate(s, c);
  EXPECT_EQ(limit.two_xi, limit.two_xi_limit);
  for (double f : {1e-3, 1e-6, 1e-9}) {
    EXPECT_NEAR(oracle::gain_estimate(s, c * (1.0 - f)).two_xi, limit.two_xi_limit, f + 1e-9);
  }
}

TEST(Oracle, GainEstimateFlagsSlowPulses) {
  const Scenario s = fixtures::preset("fig5");
  const auto e = oracle::gain_estimate(s, PhysicalConstants::c);
  EXPECT_TRUE(e.v_in_range);
  EXPECT_LT(e.v_min, PhysicalConstants::c);
  EXPECT_FALSE(oracle::gain_estimate(s, 0.5 * e.v_min).v_in_range);
}

TEST(Oracle, QuadratureMatchesIndependentIntegration) {
  const Scenario s = fixtures::preset("fig3a");
  const std::pair<double, double> reference[] = {{0.3, 0.8049710322733223},
                                                 {0.5, 0.4777852925370796},
                                                 {1.0, -0.10367791160385842},
                                                 {3.0, -0.878695996295676}};
  for (const auto& [t, inversion] : reference) {
    EXPECT_NEAR(oracle::inversion_quadrature(t, s), inversion, 1e-8) << t;
  }
}

TEST(Oracle, QuadratureHandlesLongHorizons) {
  const Scenario s = fixtures::preset("fig3b");
  EXPECT_NO_THROW(oracle::rho22_quadrature(600.0, s));
  EXPECT_GT(oracle::rho22_quadrature(600.0, s), 0.0);
}

TEST(Oracle, ClosedFormTracksQuadratureAfterPump) {
  const Scenario s = fixtures::preset("fig3a");
  ASSERT_TRUE(oracle::closed_form_valid(s));
  for (double t = 0.5; t < 5.0; t += 0.25) {
    EXPECT_NEAR(oracle::inversion_closed_form(t, 0.0, s), oracle::inversion_quadrature(t, s), 0.02) << t;
  }
  for (double t = 0.0; t < 5.0; t += 0.01) EXPECT_LE(std::abs(oracle::inversion_closed_form(t, 0.0, s)), 1.0);
}

TEST(Oracle, HeavisideWindowLastsTau2Ln2) {
  const Scenario s = fixtures::preset("fig3a");
  const double onset = s.pump.arrival - oracle::u_factor(s) * s.pump.duration;
  EXPECT_EQ(oracle::inversion_heaviside(onset - 1e-9, 0.0, s), 0.0);
  EXPECT_NEAR(oracle::inversion_heaviside(onset + std::log(2.0), 0.0, s), 0.0, 1e-12);
}

TEST(Oracle, PumpAttenuationFlag) {
  Scenario s = fixtures::preset("fig3a");
  EXPECT_TRUE(oracle::pump_attenuation_negligible(s));
  s.medium.density *= 100.0;
  EXPECT_FALSE(oracle::pump_attenuation_negligible(s));
}

TEST(Oracle, SuperfluorescenceDelayLaw) {
  EXPECT_NEAR(oracle::sf_delay(1000.0, 21.1), 0.4034640990119971, 1e-12);
}

TEST(Oracle, PiHalfPhotonNumber) {
  EXPECT_NEAR(oracle::pi_half_photons(2e-3, 1.46e-6), 1.7534247197118532e7, 1.0);
  EXPECT_NEAR(oracle::pi_half_photons(2e-3, 1.46e-6) / 1.75e7, 1.0, 0.01);
}

TEST(Oracle, PiHalfPulseHasAreaPiHalfAndMatchingPhotonCount) {
  const double tau2 = 1.0 / gamma_from_dipole(3.33e-31, 1.29e6);
  const double dt = 1e-4;
  std::vector<cplx> series;
  for (double t = -5.0; t <= 5.0; t += dt) series.emplace_back(oracle::pi_half_pulse(t, tau2));
  EXPECT_NEAR(pulse_area(series, dt), std::numbers::pi / 2.0, 1e-3 * std::numbers::pi / 2.0);
  // With the dipole moment consistent with Gamma, the envelope photon count
  // equals the closed form.
  const double photons = oracle::photons_from_envelope(series, dt, 2e-3, 3.33e-31, 1.29e6);
  const double wavelength = 2.0 * std::numbers::pi * PhysicalConstants::c / 1.29e6;
  EXPECT_NEAR(photons / oracle::pi_half_photons(2e-3, wavelength), 1.0, 1e-6);
}

TEST(Oracle, PumpPeakForUnitQ) {
  // n_p = T_p 1e12 with tau_p = T_p fs holds the peak flux fixed.
  Scenario s = fixtures::preset("fig4");
  for (double tp : {1.0, 20.0, 60.0}) {
    s.pump.duration = tp * 1e-3;
    s.pump.photons = tp * 1e12;
    const double peak_si = pump_boundary(s.pump.arrival, s.pump, s.medium) * 1e18;
    EXPECT_NEAR(peak_si / 4.489678053129164e+37, 1.0, 1e-12);
  }
}
