#include "sfmb/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <thread>

#include "sfmb/oracle.hpp"

namespace sfmb {

namespace {

constexpr std::size_t kBlock = 32;
constexpr std::size_t kPhotonBins = 30;
constexpr std::size_t kDelayBins = 50;

struct Slot {
  RealizationScalars scalars;
  std::vector<double> intensity_fwd, intensity_bwd;
  std::vector<double> spectrum_fwd, spectrum_bwd;
};

std::vector<double> intensities(const std::vector<cplx>& omega) {
  std::vector<double> out(omega.size());
  std::transform(omega.begin(), omega.end(), out.begin(), [](const cplx& w) { return std::norm(w); });
  return out;
}

void add_to(std::vector<double>& acc, const std::vector<double>& v) {
  if (acc.empty()) acc.assign(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void summarize(DirectionSummary& d, const std::vector<RealizationScalars>& rows, bool forward,
               const EnsembleSpec& spec, std::uint64_t seed) {
  std::vector<double> areas, peaks, photons, delays, hits;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    areas.push_back(forward ? r.area_fwd : r.area_bwd);
    peaks.push_back(forward ? r.peak_fwd : r.peak_bwd);
    photons.push_back(forward ? r.photons_fwd : r.photons_bwd);
    hits.push_back(areas.back() >= kAreaThreshold ? 1.0 : 0.0);
    const auto& delay = forward ? r.delay_fwd : r.delay_bwd;
    if (delay) delays.push_back(*delay);
  }
  d.threshold_probability = mean_of(hits);
  d.area_mean = mean_of(areas);
  d.peak_mean = mean_of(peaks);
  d.peak_std = std_of(peaks);
  d.delay_mean = mean_of(delays);
  d.delay_std = std_of(delays);
  d.delay_count = delays.size();

  const auto mean = [](const std::vector<double>& v) { return mean_of(v); };
  const std::size_t resamples = spec.bootstrap_resamples;
  if (!hits.empty()) {
    d.threshold_ci = bootstrap_interval(hits, mean, resamples, seed + 1);
    d.peak_ci = bootstrap_interval(peaks, mean, resamples, seed + 2);
  }
  if (!delays.empty()) d.delay_ci = bootstrap_interval(delays, mean, resamples, seed + 3);

  d.photons = photon_histogram(photons, kPhotonBins);
  const double span = spec.grid.t_end - spec.scenario.pump.arrival;
  d.delays = histogram(delays, linear_edges(0.0, span > 0.0 ? span : 1.0, kDelayBins));
}

}  // namespace

bool EnsembleSummary::failed_too_often() const {
  return static_cast<double>(failed) > 0.01 * static_cast<double>(requested);
}

RealizationScalars extract_scalars(const Scenario& s, const RunRecord& r) {
  RealizationScalars out;
  out.index = r.noise.realization_index;
  out.ok = true;
  const double dt = r.dt();
  out.area_fwd = pulse_area(r.omega_fwd_out, dt);
  out.area_bwd = pulse_area(r.omega_bwd_out, dt);
  out.peak_fwd = peak_intensity(r.omega_fwd_out);
  out.peak_bwd = peak_intensity(r.omega_bwd_out);
  out.photons_fwd = oracle::photons_from_envelope(r.omega_fwd_out, dt, s.medium.radius,
                                                  s.transition.dipole, s.transition.omega);
  out.photons_bwd = oracle::photons_from_envelope(r.omega_bwd_out, dt, s.medium.radius,
                                                  s.transition.dipole, s.transition.omega);
  out.delay_fwd = delay_time(r.time, r.omega_fwd_out, r.jp_out);
  // The backward pulse leaves at z = 0, so its delay is taken from the incident pump peak.
  std::vector<double> jp_in(r.time.size());
  for (std::size_t i = 0; i < r.time.size(); ++i) {
    jp_in[i] = s.sim.pump_enabled ? pump_boundary(r.time[i], s.pump, s.medium) : 0.0;
  }
  out.delay_bwd = delay_time(r.time, r.omega_bwd_out, jp_in);
  out.trace_error = r.diagnostics.max_trace_error;
  return out;
}

double threshold_fraction(const std::vector<double>& values, double threshold) {
  if (values.empty()) return 0.0;
  const auto hits = std::count_if(values.begin(), values.end(), [&](double v) { return v >= threshold; });
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

Interval bootstrap_interval(const std::vector<double>& values,
                            const std::function<double(const std::vector<double>&)>& statistic,
                            std::size_t resamples, std::uint64_t seed) {
  if (values.empty() || resamples == 0) return {};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> stats(resamples);
  std::vector<double> sample(values.size());
  for (auto& st : stats) {
    for (auto& x : sample) x = values[pick(rng)];
    st = statistic(sample);
  }
  std::sort(stats.begin(), stats.end());
  const auto at = [&](double q) {
    const auto i = static_cast<std::size_t>(std::floor(q * static_cast<double>(resamples - 1)));
    return stats[i];
  };
  return {at(0.025), at(0.975)};
}

EnsembleSummary run_ensemble(const EnsembleSpec& spec) {
  const Scenario& s = spec.scenario;
  EnsembleSummary out;
  out.requested = spec.realizations;

  std::vector<double> sum_i_fwd, sum_i_bwd, sum_s_fwd, sum_s_bwd;
  const std::size_t workers = std::max<std::size_t>(spec.workers, 1);

  for (std::size_t begin = 0; begin < spec.realizations; begin += kBlock) {
    const std::size_t end = std::min(spec.realizations, begin + kBlock);
    std::vector<Slot> slots(end - begin);
    std::atomic<std::size_t> next{begin};

    const auto work = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < end;) {
        Slot& slot = slots[i - begin];
        slot.scalars.index = i;
        try {
          const RunRecord r = run(s, spec.grid, NoiseSpec{spec.master_seed, i, true});
          slot.scalars = extract_scalars(s, r);
          slot.intensity_fwd = intensities(r.omega_fwd_out);
          slot.intensity_bwd = intensities(r.omega_bwd_out);
          Spectrum f = spectrum(r.omega_fwd_out, r.dt());
          Spectrum b = spectrum(r.omega_bwd_out, r.dt());
          slot.spectrum_fwd = std::move(f.intensity);
          slot.spectrum_bwd = std::move(b.intensity);
          if (i == 0) {
            // Only the worker that owns realization 0 writes the shared axes.
            out.time = r.time;
            out.detuning = std::move(f.detuning);
            out.spectral_resolution = f.resolution;
          }
        } catch (const std::exception& e) {
          slot.scalars.ok = false;
          slot.scalars.error = e.what();
        }
      }
    };

    const std::size_t n_threads = std::min(workers, end - begin);
    if (n_threads <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
    }

    for (Slot& slot : slots) {
      if (slot.scalars.ok) {
        ++out.completed;
        add_to(sum_i_fwd, slot.intensity_fwd);
        add_to(sum_i_bwd, slot.intensity_bwd);
        add_to(sum_s_fwd, slot.spectrum_fwd);
        add_to(sum_s_bwd, slot.spectrum_bwd);
      } else {
        ++out.failed;
      }
      out.realizations.push_back(std::move(slot.scalars));
    }
  }

  if (out.time.empty()) {
    // Realization 0 failed; rebuild the shared axes from the grid.
    out.time.resize(spec.grid.n_steps + 1);
    for (std::size_t i = 0; i < out.time.size(); ++i) out.time[i] = static_cast<double>(i) * spec.grid.dt;
    const Spectrum axis = spectrum(std::vector<cplx>(out.time.size()), spec.grid.dt);
    out.detuning = axis.detuning;
    out.spectral_resolution = axis.resolution;
  }

  const double norm = out.completed ? 1.0 / static_cast<double>(out.completed) : 0.0;
  const auto finish = [&](std::vector<double>& v, std::size_t n) {
    v.resize(n, 0.0);
    for (double& x : v) x *= norm;
  };
  finish(sum_i_fwd, out.time.size());
  finish(sum_i_bwd, out.time.size());
  finish(sum_s_fwd, out.detuning.size());
  finish(sum_s_bwd, out.detuning.size());
  out.fwd.mean_intensity = std::move(sum_i_fwd);
  out.bwd.mean_intensity = std::move(sum_i_bwd);
  out.fwd.mean_spectrum = std::move(sum_s_fwd);
  out.bwd.mean_spectrum = std::move(sum_s_bwd);

  const std::uint64_t boot_seed = spec.master_seed ^ 0xb5ad4eceda1ce2a9ULL;
  summarize(out.fwd, out.realizations, true, spec, boot_seed);
  summarize(out.bwd, out.realizations, false, spec, boot_seed + 16);
  return out;
}

}  // namespace sfmb
