#pragma once

#include <complex>
#include <cstdint>

namespace sfmb {

enum class Direction : std::uint8_t { forward = 0, backward = 1 };

struct NoiseSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t realization_index = 0;
  bool enabled = true;
};

/// Counter-based standard complex normal: real and imaginary parts are
/// independent N(0, 1). The value depends only on the arguments, never on
/// call order, so realizations are reproducible under any scheduling.
std::complex<double> standard_normal_pair(const NoiseSpec& noise, std::uint64_t cell,
                                          std::uint64_t step, Direction direction);

/// Langevin increment for rho21 over one step. `diffusion` is K = K0 * rho22
/// (1/ps); the result has <|dW|^2> = K dt with each quadrature carrying K dt / 2.
/// Returns exactly zero when K <= 0 or noise is disabled.
std::complex<double> sample_noise(double diffusion, double dt, const NoiseSpec& noise,
                                  std::uint64_t cell, std::uint64_t step, Direction direction);

}  // namespace sfmb
