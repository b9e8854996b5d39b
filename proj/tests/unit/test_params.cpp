#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "presets.hpp"
#include "sfmb/error.hpp"
#include "sfmb/params.hpp"

using namespace sfmb;

namespace {

bool mentions(const std::vector<std::string>& notes, const std::string& word) {
  for (const auto& n : notes) {
    if (n.find(word) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(SolidAngle, TwoMicronSpotOverOneMillimetre) {
  // 2 pi (1 - cos(atan(r / L)))
  EXPECT_NEAR(collection_solid_angle(2e-3, 1.0), 1.2566332915047505e-05, 1e-15);
}

TEST(SolidAngle, ZeroRadiusIsZero) { EXPECT_EQ(collection_solid_angle(0.0, 1.0), 0.0); }

TEST(SolidAngle, MonotoneInRadiusAndLength) {
  double prev = 0.0;
  for (double r = 1e-4; r < 10.0; r *= 1.7) {
    const double phi = collection_solid_angle(r, 1.0);
    EXPECT_GT(phi, prev);
    prev = phi;
  }
  prev = 4.0 * std::numbers::pi;
  for (double l = 1e-3; l < 100.0; l *= 1.7) {
    const double phi = collection_solid_angle(1.0, l);
    EXPECT_LT(phi, prev);
    prev = phi;
  }
}

TEST(SolidAngle, SmallAngleLimitIsAreaOverLengthSquared) {
  for (double x : {1e-3, 1e-5, 1e-8}) {
    const double phi = collection_solid_angle(x, 1.0);
    EXPECT_NEAR(phi / (std::numbers::pi * x * x), 1.0, x * x);
  }
}

TEST(SolidAngle, ApproachesHemisphere) {
  EXPECT_NEAR(collection_solid_angle(1e8, 1.0), 2.0 * std::numbers::pi, 1e-7);
}

TEST(Derive, TableColumnFig3a) {
  const Scenario s = fixtures::preset("fig3a");
  const DerivedParams d = derive(s);
  EXPECT_NEAR(d.alpha, 192.0, 1e-9);
  EXPECT_NEAR(d.eta, 96.0, 1e-9);
  EXPECT_NEAR(d.phi * 1e6, 12.566, 1e-3);
  EXPECT_NEAR(d.gain_length_decay, 0.149896229, 1e-9);
  EXPECT_NEAR(d.gain_length_pump, 0.00899377374, 1e-11);
  // phi Gamma^2 omega^2 / (24 n pi^2 c^3) with n = 3e13 / mm^3
  EXPECT_NEAR(d.noise_prefactor / 1.0921785e-07, 1.0, 1e-6);
}

TEST(Derive, AlphaIsProductToMachinePrecision) {
  Scenario s = fixtures::preset("fig5");
  for (double n : {1e13, 3.3e14, 7.77e14}) {
    s.medium.density = n;
    EXPECT_DOUBLE_EQ(derive(s).alpha, n * s.transition.sigma_r * s.medium.length);
  }
}

TEST(Derive, HomogeneousUnderFixedAlpha) {
  // eta L and alpha depend on n and L only through alpha.
  const Scenario a = fixtures::preset_alpha("fig5", 0.25, 1500.0);
  const Scenario b = fixtures::preset_alpha("fig5", 0.5, 1500.0);
  const DerivedParams da = derive(a), db = derive(b);
  EXPECT_NEAR(da.alpha, db.alpha, 1e-9);
  EXPECT_NEAR(da.eta * 0.25, db.eta * 0.5, 1e-9);
}

TEST(Derive, DecayRateFromDipoleIsAboutOneTerahertz) {
  EXPECT_NEAR(gamma_from_dipole(3.33e-31, 1.29e6), 1.0039208431065307, 1e-12);
  EXPECT_NEAR(gamma_from_dipole(3.33e-31, 1.29e6), 1.0, 0.02);
}

TEST(Derive, TextbookCrossSection) {
  EXPECT_NEAR(textbook_resonant_cross_section(1.46e-6) * 1e-6, 1.0177640300840522e-18, 1e-30);
}

TEST(Validate, RejectsNegativeDensityByName) {
  Scenario s = fixtures::preset("fig5");
  s.medium.density = -1.0;
  try {
    derive(s);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "n");
  }
}

TEST(Validate, RejectsInconsistentWavelength) {
  Scenario s = fixtures::preset("fig5");
  s.transition.wavelength *= 1.01;
  EXPECT_THROW(derive(s), ConfigError);
  s.transition.wavelength /= 1.01;
  s.transition.wavelength *= 1.0005;
  EXPECT_NO_THROW(derive(s));
}

TEST(Validate, RejectsPulseArrivingTooEarly) {
  Scenario s = fixtures::preset("fig5");
  s.pump.arrival = 2.0 * s.pump.duration;
  EXPECT_THROW(derive(s), ConfigError);
}

TEST(Validate, RejectsZeroFields) {
  for (int field = 0; field < 5; ++field) {
    Scenario s = fixtures::preset("fig3a");
    switch (field) {
      case 0: s.transition.gamma = 0.0; break;
      case 1: s.medium.length = 0.0; break;
      case 2: s.medium.radius = 0.0; break;
      case 3: s.pump.photons = 0.0; break;
      case 4: s.pump.duration = -1.0; break;
    }
    EXPECT_THROW(derive(s), ConfigError) << "field " << field;
  }
}

TEST(Warnings, Fig5ColumnNotesFresnelNumber) {
  const Scenario s = fixtures::preset("fig5");
  EXPECT_NEAR(derive(s).fresnel, 17.21420632103996, 1e-9);
  EXPECT_TRUE(mentions(model_warnings(s), "Fresnel"));
}

TEST(Warnings, CrossSectionMismatchIsReported) {
  const Scenario s = fixtures::preset("fig3a");
  EXPECT_TRUE(mentions(model_warnings(s), "sigma_r"));
  Scenario t = s;
  t.transition.sigma_r = textbook_resonant_cross_section(t.transition.wavelength);
  EXPECT_FALSE(mentions(model_warnings(t), "sigma_r"));
}
