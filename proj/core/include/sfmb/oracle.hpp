#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "sfmb/params.hpp"
#include "sfmb/solver.hpp"

// Closed-form and semi-analytic results for the weak-emission pumping regime
// (|Omega| << Gamma < sigma J_p). Used as independent checks on the solver and
// as quick design estimates that need no simulation.

namespace sfmb::oracle {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pump flux with Beer-Lambert attenuation at rho00 = 1.
double jp_analytic(double t, double z, const Scenario& scenario);

/// True when n sigma L <= 0.05, where the unattenuated-pump forms hold.
bool pump_attenuation_negligible(const Scenario& scenario);

/// Ground-state population with the error-function depletion profile.
double rho00_analytic(double t, double z, const Scenario& scenario);

/// rho22(t, z = 0) from the one-dimensional integral of the pump-only rate
/// equation, adaptive Gauss-Kronrod to 1e-8 absolute. Throws QuadratureError.
double rho22_quadrature(double t, const Scenario& scenario);

/// rho22 - rho11 at z = 0 built from rho22_quadrature and rho00_analytic.
double inversion_quadrature(double t, const Scenario& scenario);

/// Shift u of the maximum ground-state consumption rate, in units of tau_p.
double u_factor(const Scenario& scenario);

/// True in the tau_p < tau2 regime where the closed forms below apply.
bool closed_form_valid(const Scenario& scenario);

/// [1 - rho00][2 exp(-Gamma (t - tau_i - z/c + u tau_p)) - 1] with the decay
/// factor capped at 1 before the consumption peak, so |I| <= 1.
double inversion_closed_form(double t, double z, const Scenario& scenario);

/// Heaviside-simplified inversion: zero before t = tau_i + z/c - u tau_p.
double inversion_heaviside(double t, double z, const Scenario& scenario);

struct GainEstimate {
  double two_xi = 0.0;        // gain factor at group velocity v
  double two_xi_limit = 0.0;  // v -> c upper bound
  double v_min = 0.0;         // mm/ps
  double v_max = 0.0;         // mm/ps (= c)
  double weight = 0.5;        // forward weighting P
  bool v_in_range = true;     // false: the pulse falls out of the gain window
};

/// Swept-gain exponent 2 xi for an emitted pulse moving at group velocity v
/// (0 < v <= c) behind the pump, with forward weighting P in (0, 1].
GainEstimate gain_estimate(const Scenario& scenario, double v, double weight = 0.5);

/// v -> c limit of the gain factor for a given u tau_p Gamma.
double gain_exponent_limit(double u_tau_gamma, double weight = 0.5);

/// scale * alpha^-1 * (ln(2 pi alpha) / 2)^2, the superfluorescence delay law.
double sf_delay(double alpha, double scale);

/// Photon number of a Gaussian pi/2 pulse lasting tau2 ln 2.
double pi_half_photons(double radius, double wavelength);

/// Photons carried by a Rabi-envelope record through a spot of radius r:
/// c eps0 pi r^2 hbar sum|Omega|^2 dt / (2 d^2 omega). Inputs in mm, ps, C m, rad/ps.
double photons_from_envelope(std::span<const cplx> omega, double dt, double radius, double dipole,
                             double omega_transition);

/// Omega0 exp(-(t / (kappa tau2))^2) with Omega0 sqrt(pi) kappa tau2 = pi/2, kappa = ln 2.
double pi_half_pulse(double t, double tau2);

}  // namespace sfmb::oracle
