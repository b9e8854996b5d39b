#include "sfmb/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sfmb/error.hpp"

namespace sfmb {

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "must be finite and > 0 (got " << value << ")";
    throw ConfigError(field, os.str());
  }
}

}  // namespace

void validate(const TransitionParams& transition) {
  require_positive(transition.omega, "omega");
  require_positive(transition.wavelength, "lambda");
  require_positive(transition.dipole, "d");
  require_positive(transition.gamma, "gamma");
  require_positive(transition.sigma_r, "sigma_r");
  const double implied_c = transition.omega * transition.wavelength / (2.0 * std::numbers::pi);
  const double mismatch = std::abs(implied_c / PhysicalConstants::c - 1.0);
  if (mismatch > 1e-3) {
    std::ostringstream os;
    os << "omega*lambda/(2 pi) = " << implied_c << " mm/ps differs from c by " << mismatch * 100
       << "% (limit 0.1%)";
    throw ConfigError("omega", os.str());
  }
}

void validate(const MediumParams& medium) {
  require_positive(medium.density, "n");
  require_positive(medium.length, "L");
  require_positive(medium.sigma, "sigma");
  require_positive(medium.radius, "r");
}

void validate(const PumpParams& pump) {
  require_positive(pump.photons, "n_p");
  require_positive(pump.duration, "tau_p");
  if (!std::isfinite(pump.arrival) || pump.arrival < 3.0 * pump.duration) {
    std::ostringstream os;
    os << "must be >= 3 tau_p = " << 3.0 * pump.duration << " ps (got " << pump.arrival << ")";
    throw ConfigError("tau_i", os.str());
  }
}

double collection_solid_angle(double radius, double length) {
  // 2 pi (1 - 1/s) with s = sqrt(1 + x), rewritten as 2 pi x / (s (1 + s)) to
  // avoid cancellation when r << L.
  const double x = (radius / length) * (radius / length);
  const double s = std::sqrt(1.0 + x);
  return 2.0 * std::numbers::pi * x / (s * (1.0 + s));
}

double gamma_from_dipole(double dipole, double omega) {
  using K = PhysicalConstants;
  const double omega_si = omega * 1e12;
  const double rate_si = dipole * dipole * omega_si * omega_si * omega_si /
                         (3.0 * std::numbers::pi * K::eps0 * K::hbar * K::c_si * K::c_si * K::c_si);
  return rate_si * 1e-12;
}

double gain_length(double tau_ref) { return PhysicalConstants::c * tau_ref / 2.0; }

double textbook_resonant_cross_section(double wavelength) {
  return 3.0 * wavelength * wavelength / (2.0 * std::numbers::pi);
}

DerivedParams derive(const TransitionParams& transition, const MediumParams& medium,
                     const PumpParams& pump) {
  validate(transition);
  validate(medium);
  validate(pump);

  constexpr double pi = std::numbers::pi;
  constexpr double c = PhysicalConstants::c;
  DerivedParams out;
  out.alpha = medium.density * transition.sigma_r * medium.length;
  out.eta = transition.gamma * out.alpha / (2.0 * medium.length);
  out.phi = collection_solid_angle(medium.radius, medium.length);
  out.gain_length_pump = gain_length(pump.duration);
  out.gain_length_decay = gain_length(transition.tau2());
  out.fresnel = pi * medium.radius * medium.radius / (medium.length * transition.wavelength);
  const double g = transition.gamma;
  const double w = transition.omega;
  out.noise_prefactor = out.phi * g * g * w * w / (24.0 * medium.density * pi * pi * c * c * c);
  return out;
}

DerivedParams derive(const Scenario& scenario) {
  return derive(scenario.transition, scenario.medium, scenario.pump);
}

std::vector<std::string> model_warnings(const Scenario& scenario) {
  std::vector<std::string> notes;
  const DerivedParams d = derive(scenario);
  if (d.fresnel > 2.0 || d.fresnel < 0.5) {
    std::ostringstream os;
    os << "Fresnel number " << d.fresnel
       << " is not close to 1; the 1D diffraction-free model is outside its validity range";
    notes.push_back(os.str());
  }
  const double textbook = textbook_resonant_cross_section(scenario.transition.wavelength);
  const double ratio = scenario.transition.sigma_r / textbook;
  if (std::abs(ratio - 1.0) > 0.1) {
    std::ostringstream os;
    os << "sigma_r is " << ratio << " x 3 lambda^2/(2 pi); using the configured value";
    notes.push_back(os.str());
  }
  const double gamma_dipole = gamma_from_dipole(scenario.transition.dipole, scenario.transition.omega);
  if (std::abs(gamma_dipole / scenario.transition.gamma - 1.0) > 0.05) {
    std::ostringstream os;
    os << "decay rate from the dipole moment is " << gamma_dipole
       << " /ps vs configured gamma " << scenario.transition.gamma
       << " /ps; photon-number conversions use the dipole moment";
    notes.push_back(os.str());
  }
  return notes;
}

}  // namespace sfmb
