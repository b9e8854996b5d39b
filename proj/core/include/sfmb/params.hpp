#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

// Internal units: length in mm, time in ps, rates in 1/ps (THz).
// SI only appears in the dipole/photon conversions and at the config boundary.

namespace sfmb {

struct PhysicalConstants {
  static constexpr double c = 0.299792458;         // mm/ps
  static constexpr double eps0 = 8.8541878128e-12;  // F/m
  static constexpr double hbar = 1.054571817e-34;   // J*s
  static constexpr double c_si = 299792458.0;       // m/s
};

/// The emitting |2> -> |1> transition.
struct TransitionParams {
  double omega = 0.0;       // rad/ps
  double wavelength = 0.0;  // mm
  double dipole = 0.0;      // C*m
  double gamma = 0.0;       // 1/ps, decay rate of |2>
  double sigma_r = 0.0;     // mm^2, resonant cross section

  double tau2() const { return 1.0 / gamma; }
};

struct MediumParams {
  double density = 0.0;  // 1/mm^3
  double length = 0.0;   // mm
  double sigma = 0.0;    // mm^2, pump cross section of |0> -> |2>
  double radius = 0.0;   // mm, pump spot radius
};

struct PumpParams {
  double photons = 0.0;   // photons per pulse
  double duration = 0.0;  // ps
  double arrival = 0.0;   // ps, peak time at z = 0
};

struct DerivedParams {
  double alpha = 0.0;              // optical depth n*sigma_r*L
  double eta = 0.0;                // 1/(ps*mm), Gamma*alpha/(2L)
  double phi = 0.0;                // rad, collection solid angle
  double gain_length_pump = 0.0;   // mm, c*tau_p/2
  double gain_length_decay = 0.0;  // mm, c*tau2/2
  double fresnel = 0.0;            // pi r^2 / (L lambda)
  double noise_prefactor = 0.0;    // 1/ps, multiplies rho22 in the noise correlator
};

enum class InitialState {
  ground,    // rho00 = 1 (all scenarios)
  inverted,  // rho22 = 1, test mode for convergence checks
  absorber,  // rho11 = 1, test mode for reabsorption checks
};

/// Small Gaussian probe injected into Omega+ at z = 0. Off unless amplitude != 0.
struct ProbePulse {
  double amplitude = 0.0;  // rad/ps
  double center = 0.0;     // ps
  double width = 0.0;      // ps, 1/e half width
};

struct SimulationOptions {
  InitialState initial = InitialState::ground;
  bool pump_enabled = true;
  bool noise_enabled = true;
  std::optional<std::size_t> grid_nz;
  std::optional<double> t_end;     // ps
  std::size_t snapshot_stride = 0;  // 0 disables I(t,z) snapshots
  ProbePulse probe;
};

struct Scenario {
  TransitionParams transition;
  MediumParams medium;
  PumpParams pump;
  SimulationOptions sim;
};

void validate(const TransitionParams& transition);
void validate(const MediumParams& medium);
void validate(const PumpParams& pump);

/// Throws ConfigError on the first non-positive or inconsistent field.
DerivedParams derive(const TransitionParams& transition, const MediumParams& medium,
                     const PumpParams& pump);
DerivedParams derive(const Scenario& scenario);

/// Solid angle of a cone of half-angle atan(r/L). r = 0 gives 0.
double collection_solid_angle(double radius, double length);

/// Spontaneous decay rate d^2 w^3 / (3 pi eps0 hbar c^3), returned in 1/ps.
double gamma_from_dipole(double dipole, double omega);

/// c * tau_ref / 2 in mm.
double gain_length(double tau_ref);

/// 3 lambda^2 / (2 pi), the textbook resonant cross section (mm^2).
double textbook_resonant_cross_section(double wavelength);

/// Non-fatal model-validity notes (Fresnel number, cross-section mismatch).
std::vector<std::string> model_warnings(const Scenario& scenario);

}  // namespace sfmb
