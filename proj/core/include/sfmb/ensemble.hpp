#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sfmb/observables.hpp"
#include "sfmb/solver.hpp"

namespace sfmb {

struct EnsembleSpec {
  Scenario scenario;
  GridSpec grid;
  std::uint64_t master_seed = 0;
  std::size_t realizations = 100;
  std::size_t workers = 1;
  std::size_t bootstrap_resamples = 1000;
};

/// Scalars extracted from one realization. Failed realizations keep their
/// index and error text and are left out of every aggregate.
struct RealizationScalars {
  std::uint64_t index = 0;
  bool ok = false;
  std::string error;
  double area_fwd = 0.0, area_bwd = 0.0;        // rad
  double photons_fwd = 0.0, photons_bwd = 0.0;
  double peak_fwd = 0.0, peak_bwd = 0.0;        // rad^2/ps^2
  std::optional<double> delay_fwd, delay_bwd;   // ps
  double trace_error = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct DirectionSummary {
  std::vector<double> mean_intensity;  // <|Omega|^2>(t), rad^2/ps^2
  std::vector<double> mean_spectrum;   // <S>(w) on EnsembleSummary::detuning
  double threshold_probability = 0.0;  // P(area >= pi/2)
  Interval threshold_ci;
  double area_mean = 0.0;
  double peak_mean = 0.0, peak_std = 0.0;
  Interval peak_ci;
  double delay_mean = 0.0, delay_std = 0.0;
  Interval delay_ci;
  std::size_t delay_count = 0;  // realizations with a defined delay
  Histogram photons;
  Histogram delays;
};

struct EnsembleSummary {
  std::size_t requested = 0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::vector<double> time;
  std::vector<double> detuning;  // rad/ps
  double spectral_resolution = 0.0;
  DirectionSummary fwd, bwd;
  std::vector<RealizationScalars> realizations;  // sorted by index

  /// More than 1% of the realizations failed.
  bool failed_too_often() const;
};

/// Threshold on the pulse area that separates coherent emission from ASE.
constexpr double kAreaThreshold = 1.5707963267948966;

/// Reduces one realization to its scalars (no spectra or averages).
RealizationScalars extract_scalars(const Scenario& scenario, const RunRecord& record);

/// Runs realizations 0..N-1 over a worker pool. Averages are accumulated block
/// by block in index order, so every output is independent of the worker count.
EnsembleSummary run_ensemble(const EnsembleSpec& spec);

/// Fraction of values >= threshold.
double threshold_fraction(const std::vector<double>& values, double threshold);

/// Percentile bootstrap interval (2.5%, 97.5%) of `statistic` over resamples
/// drawn with a seeded std::mt19937_64.
Interval bootstrap_interval(const std::vector<double>& values,
                            const std::function<double(const std::vector<double>&)>& statistic,
                            std::size_t resamples, std::uint64_t seed);

}  // namespace sfmb
