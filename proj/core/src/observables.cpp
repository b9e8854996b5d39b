#include "sfmb/observables.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>

namespace sfmb {

namespace {

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double pulse_area(std::span<const cplx> omega, double dt) {
  double sum = 0.0;
  for (const cplx& w : omega) sum += std::abs(w);
  return sum * dt;
}

double peak_intensity(std::span<const cplx> omega) {
  double peak = 0.0;
  for (const cplx& w : omega) peak = std::max(peak, std::norm(w));
  return peak;
}

Spectrum spectrum(std::span<const cplx> omega, double dt, std::size_t padding) {
  Spectrum out;
  const std::size_t n = omega.size();
  if (n == 0) return out;
  const std::size_t len = n * std::max<std::size_t>(padding, 1);

  std::vector<cplx> in(len, cplx{});
  std::copy(omega.begin(), omega.end(), in.begin());
  std::vector<cplx> freq(len);
  auto* in_ptr = reinterpret_cast<fftw_complex*>(in.data());
  auto* out_ptr = reinterpret_cast<fftw_complex*>(freq.data());

  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    // e^{+i w t} kernel
    plan = fftw_plan_dft_1d(static_cast<int>(len), in_ptr, out_ptr, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  const double two_pi = 2.0 * std::numbers::pi;
  out.bin_width = two_pi / (static_cast<double>(len) * dt);
  out.resolution = two_pi / (static_cast<double>(n) * dt);
  out.detuning.resize(len);
  out.intensity.resize(len);
  // Reorder so negative detunings come first.
  const std::size_t half = len / 2;
  for (std::size_t j = 0; j < len; ++j) {
    const std::size_t k = (j + len - half) % len;
    const double index = k < len - half ? static_cast<double>(k)
                                        : static_cast<double>(k) - static_cast<double>(len);
    out.detuning[j] = index * out.bin_width;
    out.intensity[j] = std::norm(freq[k]) * dt * dt;
  }
  return out;
}

std::optional<std::size_t> argmax_earliest(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::optional<double> delay_time(std::span<const double> time, std::span<const cplx> omega,
                                 std::span<const double> jp_out) {
  std::vector<double> intensity(omega.size());
  std::transform(omega.begin(), omega.end(), intensity.begin(),
                 [](const cplx& w) { return std::norm(w); });
  const auto emit = argmax_earliest(intensity);
  const auto pump = argmax_earliest(jp_out);
  if (!emit || !pump || intensity[*emit] <= 0.0 || jp_out[*pump] <= 0.0) return std::nullopt;
  return time[*emit] - time[*pump];
}

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::vector<double> linear_edges(double lo, double hi, std::size_t bins) {
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  return edges;
}

std::vector<double> log_edges(double lo, double hi, std::size_t bins) {
  std::vector<double> edges = linear_edges(std::log10(lo), std::log10(hi), bins);
  for (double& e : edges) e = std::pow(10.0, e);
  return edges;
}

Histogram histogram(std::span<const double> values, std::span<const double> edges) {
  Histogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.counts.assign(edges.size() > 1 ? edges.size() - 1 : 1, 0);
  for (double v : values) {
    // upper_bound - 1 gives the bin whose left edge is <= v.
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::ptrdiff_t bin = std::distance(edges.begin(), it) - 1;
    bin = std::clamp<std::ptrdiff_t>(bin, 0, static_cast<std::ptrdiff_t>(h.counts.size()) - 1);
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  return h;
}

Histogram photon_histogram(std::span<const double> photons, std::size_t bins) {
  double lo = 0.0;
  double hi = 0.0;
  for (double p : photons) {
    if (p <= 0.0) continue;
    lo = lo == 0.0 ? p : std::min(lo, p);
    hi = std::max(hi, p);
  }
  if (hi <= 0.0) return histogram(photons, linear_edges(0.0, 1.0, 1));
  if (hi <= lo) {
    lo *= 0.5;
    hi *= 2.0;
  }
  std::vector<double> edges = log_edges(lo, hi, bins);
  edges.back() = std::nextafter(hi, HUGE_VAL);  // keep the maximum inside the last bin
  return histogram(photons, edges);
}

std::vector<std::size_t> prominent_maxima(std::span<const double> values, double min_fraction) {
  std::vector<std::size_t> peaks;
  if (values.size() < 3) return peaks;
  const double global = *std::max_element(values.begin(), values.end());
  if (global <= 0.0) return peaks;
  const double floor = min_fraction * global;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    // Plateaus count once, at their left end.
    if (values[i] >= floor && values[i] > values[i - 1] && values[i] >= values[i + 1]) {
      std::size_t j = i;
      while (j + 1 < values.size() && values[j + 1] == values[i]) ++j;
      if (j + 1 == values.size() || values[j + 1] < values[i]) peaks.push_back(i);
      i = j;
    }
  }
  return peaks;
}

std::vector<std::size_t> distinct_maxima(std::span<const double> values, double level,
                                         double prominence) {
  std::vector<std::size_t> kept;
  const auto candidates = prominent_maxima(values, level);
  if (candidates.empty()) return kept;
  const double depth = prominence * *std::max_element(values.begin(), values.end());
  for (std::size_t c : candidates) {
    if (!kept.empty()) {
      const std::size_t p = kept.back();
      const double dip = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(p),
                                           values.begin() + static_cast<std::ptrdiff_t>(c) + 1);
      if (std::min(values[p], values[c]) - dip < depth) {
        if (values[c] > values[p]) kept.back() = c;
        continue;
      }
    }
    kept.push_back(c);
  }
  return kept;
}

bool spectrum_is_split(const Spectrum& s, double min_fraction, double min_separation,
                       double prominence) {
  const auto peaks = distinct_maxima(s.intensity, min_fraction, prominence);
  if (peaks.size() < 2) return false;
  const double span = s.detuning[peaks.back()] - s.detuning[peaks.front()];
  return span >= min_separation;
}

}  // namespace sfmb
