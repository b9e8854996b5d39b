#include "sfmb/noise.hpp"

#include <cmath>
#include <numbers>

namespace sfmb {

namespace {

// splitmix64 finalizer
constexpr std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// 53 random bits -> (0, 1], never 0 so the log below is finite.
double unit_open_low(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::complex<double> standard_normal_pair(const NoiseSpec& noise, std::uint64_t cell,
                                          std::uint64_t step, Direction direction) {
  std::uint64_t key = mix(noise.master_seed);
  key = mix(key ^ noise.realization_index);
  key = mix(key ^ step);
  key = mix(key ^ ((cell << 1) | static_cast<std::uint64_t>(direction)));
  const double u1 = unit_open_low(mix(key ^ 0x6a09e667f3bcc909ULL));
  const double u2 = unit_open_low(mix(key ^ 0xbb67ae8584caa73bULL));
  // Box-Muller
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::complex<double> sample_noise(double diffusion, double dt, const NoiseSpec& noise,
                                  std::uint64_t cell, std::uint64_t step, Direction direction) {
  if (!noise.enabled || !(diffusion > 0.0)) return {0.0, 0.0};
  const double scale = std::sqrt(0.5 * diffusion * dt);
  return scale * standard_normal_pair(noise, cell, step, direction);
}

}  // namespace sfmb
