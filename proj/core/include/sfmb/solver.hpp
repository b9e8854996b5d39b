#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sfmb/noise.hpp"
#include "sfmb/params.hpp"

namespace sfmb {

using cplx = std::complex<double>;

/// Space-time grid. Nodes sit at z_k = k dz, k = 0..nz, so z = 0 and z = L are
/// both sampled. dt = dz / c makes envelope transport exact along characteristics.
struct GridSpec {
  std::size_t nz = 0;
  double dz = 0.0;     // mm
  double dt = 0.0;     // ps
  double t_end = 0.0;  // ps
  std::size_t n_steps = 0;

  std::size_t nodes() const { return nz + 1; }
};

/// Largest dt the scenario tolerates: tau_p/20, tau2/50 and a bound from the
/// field-matter coupling rate sqrt(c eta).
double max_time_step(const Scenario& scenario, const DerivedParams& derived);

/// Horizon tau_i + L/c + 6 tau2 unless the scenario overrides it.
double default_horizon(const Scenario& scenario);

/// Uses scenario.sim.grid_nz when set, otherwise the coarsest grid within
/// max_time_step. Throws ConfigError when an explicit nz violates dt <= tau_p/20
/// or dt <= tau2/50.
GridSpec make_grid(const Scenario& scenario, const DerivedParams& derived);

/// Same with an explicit cell count (0 = automatic).
GridSpec make_grid(const Scenario& scenario, const DerivedParams& derived, std::size_t nz);

/// Atomic and field variables on the grid nodes (structure of arrays).
struct FieldState {
  std::vector<double> rho00, rho11, rho22;
  std::vector<cplx> rho21_fwd, rho21_bwd;
  std::vector<cplx> omega_fwd, omega_bwd;  // rad/ps
  std::vector<double> jp;                  // photons / (ps mm^2)
  double t = 0.0;
  std::size_t step = 0;

  std::size_t nodes() const { return rho00.size(); }
  void resize(std::size_t nodes);
};

FieldState initialize(const Scenario& scenario, const GridSpec& grid);

/// Incident pump flux at z = 0, photons / (ps mm^2).
double pump_boundary(double t, const PumpParams& pump, const MediumParams& medium);

/// Running invariant checks for one realization.
struct RunDiagnostics {
  double max_trace_error = 0.0;
  double min_population = 1.0;
  double max_population = 0.0;
  std::size_t coherence_violations = 0;  // |rho21|^2 > rho22 rho11 + 1e-3
};

/// Advances a FieldState by one dt: characteristic transport of J_p and
/// Omega+-, trapezoidal source along the characteristic, a Heun step for the
/// local Bloch terms, exact exponential pump depletion and an Euler-Maruyama
/// noise kick on rho21+-.
class Stepper {
 public:
  Stepper(const Scenario& scenario, const GridSpec& grid, NoiseSpec noise);

  void step(FieldState& state);

  const RunDiagnostics& diagnostics() const { return diagnostics_; }
  const GridSpec& grid() const { return grid_; }

 private:
  void update_node(const FieldState& cur, FieldState& next, std::size_t k);
  void check_finite(const FieldState& state) const;
  void track(const FieldState& state);

  Scenario scenario_;
  DerivedParams derived_;
  GridSpec grid_;
  NoiseSpec noise_;
  FieldState scratch_;
  RunDiagnostics diagnostics_;
};

struct InversionSnapshots {
  std::size_t stride = 0;
  std::size_t nodes = 0;
  std::vector<double> times;
  std::vector<double> values;  // row-major [time][node]

  double at(std::size_t row, std::size_t node) const { return values[row * nodes + node]; }
};

/// Boundary time series of one realization. Every series shares `time`.
struct RunRecord {
  std::vector<double> time;
  std::vector<cplx> omega_fwd_out;  // Omega+(t, L)
  std::vector<cplx> omega_bwd_out;  // Omega-(t, 0)
  std::vector<double> jp_out;       // J_p(t, L)
  std::vector<double> inversion_in; // rho22 - rho11 at z = 0
  std::vector<double> rho00_in;     // rho00 at z = 0
  InversionSnapshots snapshots;
  GridSpec grid;
  NoiseSpec noise;
  RunDiagnostics diagnostics;

  double dt() const { return grid.dt; }
};

/// Integrates one realization from t = 0 to grid.t_end. Non-finite values
/// raise NumericalError.
RunRecord run(const Scenario& scenario, const GridSpec& grid, const NoiseSpec& noise);

}  // namespace sfmb
