#include "sfmb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sfmb/error.hpp"

namespace sfmb {

namespace {

constexpr double kPumpSteps = 20.0;      // dt <= tau_p / 20
constexpr double kDecaySteps = 50.0;     // dt <= tau2 / 50
constexpr double kCouplingCfl = 0.1;     // dt <= 0.1 / sqrt(c eta)
constexpr std::size_t kMinCells = 8;
constexpr double kCoherenceSlack = 1e-3;

struct Bloch {
  double r11, r22;
  cplx fwd, bwd;
};

// Local Bloch right-hand side without noise. `source` is the pump transfer
// rate sigma J_p rho00 over the step.
Bloch bloch_rhs(const Bloch& y, cplx omega_fwd, cplx omega_bwd, double gamma, double source) {
  const double w_fwd = std::imag(omega_fwd * std::conj(y.fwd));
  const double w_bwd = std::imag(omega_bwd * std::conj(y.bwd));
  const double inversion = y.r22 - y.r11;
  const cplx half_i{0.0, 0.5};
  Bloch d;
  d.r22 = source - gamma * y.r22 - w_fwd - w_bwd;
  d.r11 = gamma * y.r22 + w_fwd + w_bwd;
  d.fwd = -0.5 * gamma * y.fwd - half_i * inversion * omega_fwd;
  d.bwd = -0.5 * gamma * y.bwd - half_i * inversion * omega_bwd;
  return d;
}

double probe_value(const ProbePulse& probe, double t) {
  if (probe.amplitude == 0.0) return 0.0;
  const double x = (t - probe.center) / probe.width;
  return probe.amplitude * std::exp(-x * x);
}

}  // namespace

double max_time_step(const Scenario& scenario, const DerivedParams& derived) {
  const double c = PhysicalConstants::c;
  double dt = std::min(scenario.pump.duration / kPumpSteps, scenario.transition.tau2() / kDecaySteps);
  dt = std::min(dt, kCouplingCfl / std::sqrt(c * derived.eta));
  return dt;
}

double default_horizon(const Scenario& scenario) {
  if (scenario.sim.t_end) return *scenario.sim.t_end;
  return scenario.pump.arrival + scenario.medium.length / PhysicalConstants::c +
         6.0 * scenario.transition.tau2();
}

GridSpec make_grid(const Scenario& scenario, const DerivedParams& derived) {
  return make_grid(scenario, derived, scenario.sim.grid_nz.value_or(0));
}

GridSpec make_grid(const Scenario& scenario, const DerivedParams& derived, std::size_t nz) {
  const double c = PhysicalConstants::c;
  const double length = scenario.medium.length;
  if (nz == 0) {
    const double dz_max = c * max_time_step(scenario, derived);
    nz = std::max(kMinCells, static_cast<std::size_t>(std::ceil(length / dz_max)));
  }
  GridSpec grid;
  grid.nz = nz;
  grid.dz = length / static_cast<double>(nz);
  grid.dt = grid.dz / c;
  grid.t_end = default_horizon(scenario);
  grid.n_steps = static_cast<std::size_t>(std::ceil(grid.t_end / grid.dt));

  const double pump_limit = scenario.pump.duration / kPumpSteps;
  const double decay_limit = scenario.transition.tau2() / kDecaySteps;
  if (grid.dt > pump_limit * (1.0 + 1e-12) || grid.dt > decay_limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "nz = " << nz << " gives dt = " << grid.dt << " ps; need dt <= tau_p/20 = " << pump_limit
       << " ps and dt <= tau2/50 = " << decay_limit << " ps";
    throw ConfigError("grid_nz", os.str());
  }
  return grid;
}

void FieldState::resize(std::size_t nodes) {
  rho00.assign(nodes, 0.0);
  rho11.assign(nodes, 0.0);
  rho22.assign(nodes, 0.0);
  rho21_fwd.assign(nodes, cplx{});
  rho21_bwd.assign(nodes, cplx{});
  omega_fwd.assign(nodes, cplx{});
  omega_bwd.assign(nodes, cplx{});
  jp.assign(nodes, 0.0);
}

FieldState initialize(const Scenario& scenario, const GridSpec& grid) {
  FieldState state;
  state.resize(grid.nodes());
  switch (scenario.sim.initial) {
    case InitialState::ground: std::fill(state.rho00.begin(), state.rho00.end(), 1.0); break;
    case InitialState::inverted: std::fill(state.rho22.begin(), state.rho22.end(), 1.0); break;
    case InitialState::absorber: std::fill(state.rho11.begin(), state.rho11.end(), 1.0); break;
  }
  if (scenario.sim.probe.amplitude != 0.0) state.omega_fwd[0] = probe_value(scenario.sim.probe, 0.0);
  return state;
}

double pump_boundary(double t, const PumpParams& pump, const MediumParams& medium) {
  const double peak = pump.photons / (std::pow(std::numbers::pi, 1.5) * medium.radius *
                                      medium.radius * pump.duration);
  const double x = (t - pump.arrival) / pump.duration;
  return peak * std::exp(-x * x);
}

Stepper::Stepper(const Scenario& scenario, const GridSpec& grid, NoiseSpec noise)
    : scenario_(scenario), derived_(derive(scenario)), grid_(grid), noise_(noise) {
  noise_.enabled = noise_.enabled && scenario.sim.noise_enabled;
  scratch_.resize(grid.nodes());
}

void Stepper::update_node(const FieldState& cur, FieldState& next, std::size_t k) {
  const std::size_t last = grid_.nz;
  const double dt = grid_.dt;
  const double dz = grid_.dz;
  const double t1 = cur.t + dt;
  const double gamma = scenario_.transition.gamma;
  const double sigma = scenario_.medium.sigma;
  const double absorb = scenario_.medium.density * sigma * dz;
  const cplx couple{0.0, 0.5 * derived_.eta * dz};  // i eta dz / 2

  // Pump: exact Beer-Lambert transport along the characteristic with a
  // trapezoidal rho00, and exact exponential depletion of rho00 at the node.
  double jp1 = 0.0;
  double rho00_1 = cur.rho00[k];
  if (scenario_.sim.pump_enabled) {
    if (k == 0) {
      jp1 = pump_boundary(t1, scenario_.pump, scenario_.medium);
    } else {
      jp1 = cur.jp[k - 1] * std::exp(-absorb * 0.5 * (cur.rho00[k - 1] + cur.rho00[k]));
    }
    rho00_1 = cur.rho00[k] * std::exp(-sigma * dt * 0.5 * (cur.jp[k] + jp1));
    if (k > 0) {
      jp1 = cur.jp[k - 1] * std::exp(-absorb * 0.5 * (cur.rho00[k - 1] + rho00_1));
      rho00_1 = cur.rho00[k] * std::exp(-sigma * dt * 0.5 * (cur.jp[k] + jp1));
    }
  }
  const double source = (cur.rho00[k] - rho00_1) / dt;

  // Field predictor at t + dt, reusing rho21(t) for the unknown endpoint.
  const cplx fwd0 = cur.omega_fwd[k];
  const cplx bwd0 = cur.omega_bwd[k];
  cplx fwd1 = (k == 0) ? cplx{probe_value(scenario_.sim.probe, t1)}
                       : cur.omega_fwd[k - 1] + couple * (cur.rho21_fwd[k - 1] + cur.rho21_fwd[k]);
  cplx bwd1 = (k == last) ? cplx{}
                          : cur.omega_bwd[k + 1] + couple * (cur.rho21_bwd[k + 1] + cur.rho21_bwd[k]);

  // Heun for the Bloch terms.
  const Bloch y0{cur.rho11[k], cur.rho22[k], cur.rho21_fwd[k], cur.rho21_bwd[k]};
  const Bloch f0 = bloch_rhs(y0, fwd0, bwd0, gamma, source);
  const Bloch ye{y0.r11 + dt * f0.r11, y0.r22 + dt * f0.r22, y0.fwd + dt * f0.fwd,
                 y0.bwd + dt * f0.bwd};
  const Bloch f1 = bloch_rhs(ye, fwd1, bwd1, gamma, source);
  Bloch y1{y0.r11 + 0.5 * dt * (f0.r11 + f1.r11), y0.r22 + 0.5 * dt * (f0.r22 + f1.r22),
           y0.fwd + 0.5 * dt * (f0.fwd + f1.fwd), y0.bwd + 0.5 * dt * (f0.bwd + f1.bwd)};

  if (noise_.enabled) {
    const double diffusion = derived_.noise_prefactor * y0.r22;
    y1.fwd += sample_noise(diffusion, dt, noise_, k, cur.step, Direction::forward);
    y1.bwd += sample_noise(diffusion, dt, noise_, k, cur.step, Direction::backward);
  }

  // Corrector: trapezoid along the characteristic with the updated coherence.
  if (k > 0) fwd1 = cur.omega_fwd[k - 1] + couple * (cur.rho21_fwd[k - 1] + y1.fwd);
  if (k < last) bwd1 = cur.omega_bwd[k + 1] + couple * (cur.rho21_bwd[k + 1] + y1.bwd);

  next.rho00[k] = rho00_1;
  next.rho11[k] = y1.r11;
  next.rho22[k] = y1.r22;
  next.rho21_fwd[k] = y1.fwd;
  next.rho21_bwd[k] = y1.bwd;
  next.omega_fwd[k] = fwd1;
  next.omega_bwd[k] = bwd1;
  next.jp[k] = jp1;
}

void Stepper::check_finite(const FieldState& s) const {
  for (std::size_t k = 0; k < s.nodes(); ++k) {
    const auto bad = [&](const char* name) { throw NumericalError(k, s.step, name); };
    if (!std::isfinite(s.rho00[k])) bad("rho00");
    if (!std::isfinite(s.rho11[k])) bad("rho11");
    if (!std::isfinite(s.rho22[k])) bad("rho22");
    if (!std::isfinite(std::norm(s.rho21_fwd[k]))) bad("rho21+");
    if (!std::isfinite(std::norm(s.rho21_bwd[k]))) bad("rho21-");
    if (!std::isfinite(std::norm(s.omega_fwd[k]))) bad("Omega+");
    if (!std::isfinite(std::norm(s.omega_bwd[k]))) bad("Omega-");
    if (!std::isfinite(s.jp[k])) bad("J_p");
  }
}

void Stepper::track(const FieldState& s) {
  double checksum = 0.0;
  for (std::size_t k = 0; k < s.nodes(); ++k) {
    const double r00 = s.rho00[k], r11 = s.rho11[k], r22 = s.rho22[k];
    diagnostics_.max_trace_error =
        std::max(diagnostics_.max_trace_error, std::abs(r00 + r11 + r22 - 1.0));
    diagnostics_.min_population = std::min({diagnostics_.min_population, r00, r11, r22});
    diagnostics_.max_population = std::max({diagnostics_.max_population, r00, r11, r22});
    const double bound = r22 * r11 + kCoherenceSlack;
    if (std::norm(s.rho21_fwd[k]) > bound || std::norm(s.rho21_bwd[k]) > bound) {
      ++diagnostics_.coherence_violations;
    }
    checksum += r00 + r11 + r22 + s.jp[k] + std::norm(s.omega_fwd[k]) + std::norm(s.omega_bwd[k]) +
                std::norm(s.rho21_fwd[k]) + std::norm(s.rho21_bwd[k]);
  }
  if (!std::isfinite(checksum)) check_finite(s);
}

void Stepper::step(FieldState& state) {
  for (std::size_t k = 0; k < state.nodes(); ++k) update_node(state, scratch_, k);
  scratch_.t = state.t + grid_.dt;
  scratch_.step = state.step + 1;
  std::swap(state, scratch_);
  track(state);
}

RunRecord run(const Scenario& scenario, const GridSpec& grid, const NoiseSpec& noise) {
  Stepper stepper(scenario, grid, noise);
  FieldState state = initialize(scenario, grid);

  RunRecord rec;
  rec.grid = grid;
  rec.noise = noise;
  const std::size_t samples = grid.n_steps + 1;
  rec.time.reserve(samples);
  rec.omega_fwd_out.reserve(samples);
  rec.omega_bwd_out.reserve(samples);
  rec.jp_out.reserve(samples);
  rec.inversion_in.reserve(samples);
  rec.rho00_in.reserve(samples);

  const std::size_t stride = scenario.sim.snapshot_stride;
  rec.snapshots.stride = stride;
  rec.snapshots.nodes = grid.nodes();

  const auto record = [&] {
    rec.time.push_back(static_cast<double>(state.step) * grid.dt);
    rec.omega_fwd_out.push_back(state.omega_fwd[grid.nz]);
    rec.omega_bwd_out.push_back(state.omega_bwd[0]);
    rec.jp_out.push_back(state.jp[grid.nz]);
    rec.inversion_in.push_back(state.rho22[0] - state.rho11[0]);
    rec.rho00_in.push_back(state.rho00[0]);
    if (stride > 0 && state.step % stride == 0) {
      rec.snapshots.times.push_back(rec.time.back());
      for (std::size_t k = 0; k < grid.nodes(); ++k) {
        rec.snapshots.values.push_back(state.rho22[k] - state.rho11[k]);
      }
    }
  };

  record();
  for (std::size_t n = 0; n < grid.n_steps; ++n) {
    stepper.step(state);
    record();
  }
  rec.diagnostics = stepper.diagnostics();
  return rec;
}

}  // namespace sfmb
