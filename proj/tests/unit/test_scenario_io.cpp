#include <gtest/gtest.h>

#include "presets.hpp"
#include "sfmb/error.hpp"
#include "sfmb/scenario_io.hpp"

using namespace sfmb;

namespace {

const char* kBase = R"(
# comment line
tau2_ps = 1
lambda_nm = 1.46
omega_rad_THz = 1.29e6
d_Cm = 3.33e-31
sigma_r_m2 = 6.4e-18
n_per_cm3 = 3e16   # trailing comment
L_mm = 1
sigma_m2 = 3.336e-23
r_um = 2
np_photons = 30e12
tau_p_fs = 60
tau_i_ps = 0.3
)";

std::string field_of(const KeyValues& kv) {
  try {
    scenario_from_key_values(kv);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(ScenarioIo, ParsesUnitSuffixedKeys) {
  const Scenario s = scenario_from_key_values(parse_key_values(kBase));
  EXPECT_DOUBLE_EQ(s.transition.gamma, 1.0);
  EXPECT_DOUBLE_EQ(s.transition.wavelength, 1.46e-6);
  EXPECT_DOUBLE_EQ(s.transition.sigma_r, 6.4e-12);
  EXPECT_DOUBLE_EQ(s.medium.density, 3e13);
  EXPECT_DOUBLE_EQ(s.medium.sigma, 3.336e-17);
  EXPECT_DOUBLE_EQ(s.medium.radius, 2e-3);
  EXPECT_DOUBLE_EQ(s.pump.duration, 0.06);
  EXPECT_TRUE(s.sim.noise_enabled);
  EXPECT_TRUE(s.sim.pump_enabled);
  EXPECT_EQ(s.sim.initial, InitialState::ground);
}

TEST(ScenarioIo, RejectsUnknownKey) {
  KeyValues kv = parse_key_values(kBase);
  kv["bogus_key"] = "1";
  EXPECT_EQ(field_of(kv), "bogus_key");
}

TEST(ScenarioIo, RejectsMissingKey) {
  KeyValues kv = parse_key_values(kBase);
  kv.erase("L_mm");
  EXPECT_EQ(field_of(kv), "L_mm");
}

TEST(ScenarioIo, RejectsBothDensityUnits) {
  KeyValues kv = parse_key_values(kBase);
  kv["n_per_mm3"] = "3e13";
  EXPECT_FALSE(field_of(kv).empty());
}

TEST(ScenarioIo, RejectsDuplicateKeys) {
  EXPECT_THROW(parse_key_values("L_mm = 1\nL_mm = 2\n"), ConfigError);
}

TEST(ScenarioIo, RejectsMalformedNumber) {
  KeyValues kv = parse_key_values(kBase);
  kv["L_mm"] = "1mm";
  EXPECT_EQ(field_of(kv), "L_mm");
}

TEST(ScenarioIo, RejectsNegativeDensityWithFieldName) {
  KeyValues kv = parse_key_values(kBase);
  kv["n_per_cm3"] = "-3e16";
  EXPECT_EQ(field_of(kv), "n");
}

TEST(ScenarioIo, SimulationSwitches) {
  KeyValues kv = parse_key_values(kBase);
  kv["noise"] = "off";
  kv["pump"] = "off";
  kv["initial_state"] = "absorber";
  kv["grid_nz"] = "64";
  kv["t_end_ps"] = "2.5";
  const Scenario s = scenario_from_key_values(kv);
  EXPECT_FALSE(s.sim.noise_enabled);
  EXPECT_FALSE(s.sim.pump_enabled);
  EXPECT_EQ(s.sim.initial, InitialState::absorber);
  EXPECT_EQ(*s.sim.grid_nz, 64u);
  EXPECT_DOUBLE_EQ(*s.sim.t_end, 2.5);
  kv["noise"] = "maybe";
  EXPECT_EQ(field_of(kv), "noise");
}

TEST(ScenarioIo, RoundTripIsExact) {
  const Scenario s = fixtures::preset("fig6");
  const Scenario t = scenario_from_key_values(scenario_to_key_values(s));
  EXPECT_EQ(t.transition.gamma, s.transition.gamma);
  EXPECT_EQ(t.transition.wavelength, s.transition.wavelength);
  EXPECT_EQ(t.medium.density, s.medium.density);
  EXPECT_EQ(t.medium.length, s.medium.length);
  EXPECT_EQ(t.medium.radius, s.medium.radius);
  EXPECT_EQ(t.pump.photons, s.pump.photons);
  EXPECT_EQ(t.pump.duration, s.pump.duration);
  EXPECT_EQ(t.pump.arrival, s.pump.arrival);
}

TEST(ScenarioIo, EveryPresetLoads) {
  for (const char* name : {"fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7", "fig10"}) {
    EXPECT_NO_THROW(derive(fixtures::preset(name))) << name;
  }
}
