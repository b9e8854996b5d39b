#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sfmb/solver.hpp"

namespace sfmb {

/// Rectangle-rule pulse area sum |Omega| dt (rad).
double pulse_area(std::span<const cplx> omega, double dt);

/// Peak of |Omega|^2.
double peak_intensity(std::span<const cplx> omega);

struct Spectrum {
  std::vector<double> detuning;   // rad/ps, ascending, centered on the carrier
  std::vector<double> intensity;  // |sum Omega(t) e^{i w t} dt|^2
  double resolution = 0.0;        // 2 pi / record length, rad/ps
  double bin_width = 0.0;         // detuning spacing after zero padding
};

/// Spectral intensity of a complex envelope via a zero-padded DFT (no window).
/// With the dt factor inside the modulus, sum |Omega|^2 dt = (1/2pi) sum S dw exactly.
Spectrum spectrum(std::span<const cplx> omega, double dt, std::size_t padding = 4);

/// Index of the largest value, earliest on ties; nullopt when empty.
std::optional<std::size_t> argmax_earliest(std::span<const double> values);

/// argmax |Omega|^2 - argmax J_p in ps. Missing when either series is all zero.
std::optional<double> delay_time(std::span<const double> time, std::span<const cplx> omega,
                                 std::span<const double> jp_out);

struct Histogram {
  std::vector<double> edges;  // size = counts.size() + 1
  std::vector<std::size_t> counts;

  std::size_t total() const;
};

std::vector<double> linear_edges(double lo, double hi, std::size_t bins);
std::vector<double> log_edges(double lo, double hi, std::size_t bins);

/// Counts over explicit edges. Values outside [edges.front(), edges.back()]
/// land in the first or last bin so the total always equals values.size().
Histogram histogram(std::span<const double> values, std::span<const double> edges);

/// Photon-number binning: 30 logarithmic bins over the positive range.
Histogram photon_histogram(std::span<const double> photons, std::size_t bins = 30);

/// Local maxima whose height is at least `min_fraction` of the global maximum.
std::vector<std::size_t> prominent_maxima(std::span<const double> values, double min_fraction);

/// Local maxima at or above `level` times the global maximum. Neighbours that
/// are not separated by a dip of at least `prominence` times the global maximum
/// (below the lower of the two) count once, at the higher of them.
std::vector<std::size_t> distinct_maxima(std::span<const double> values, double level,
                                         double prominence);

/// Two distinct maxima (see distinct_maxima) at least `min_separation` apart in detuning.
bool spectrum_is_split(const Spectrum& s, double min_fraction, double min_separation,
                       double prominence = 0.05);

}  // namespace sfmb
