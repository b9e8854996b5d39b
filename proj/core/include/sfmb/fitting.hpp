#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sfmb {

/// Model families. Coefficients are listed in the order they appear.
enum class FitFamily {
  exp_gain,    // a e^{b x}
  power2,      // a x^2
  power_law,   // a x^p
  delay_law,   // a x^-1 (ln(2 pi x) / 2)^2 + c
  pump_decay,  // beta e^{-delta x}
  exp_linear,  // a + b e^{-f x} + g x
};

class FitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string_view family_name(FitFamily family);
FitFamily family_from_name(std::string_view name);  // throws FitError
std::size_t coefficient_count(FitFamily family);

double evaluate(FitFamily family, std::span<const double> coefficients, double x);

struct FitOptions {
  bool log_residuals = false;  // minimize sum (ln model - ln y)^2; needs y > 0
  std::size_t max_iterations = 500;
  double tolerance = 1e-10;    // relative change of the residual sum
};

struct FitResult {
  FitFamily family = FitFamily::exp_gain;
  std::vector<double> coefficients;
  std::vector<double> standard_errors;  // NaN when the normal matrix is singular
  double rss = 0.0;                     // in the residual space that was minimized
  std::vector<double> rss_history;     // after the initial guess and every accepted step
  std::size_t iterations = 0;
  bool converged = false;
  std::string message;
};

/// Starting point from linearized regressions (log-linear for exponentials
/// and power laws, linear least squares for delay_law, a scan over f for
/// exp_linear).
std::vector<double> initial_guess(FitFamily family, std::span<const double> x,
                                  std::span<const double> y, bool log_residuals = false);

/// Levenberg-Marquardt with analytic Jacobians. Needs at least
/// coefficient_count + 1 finite points; throws FitError otherwise. A singular
/// Jacobian or exhausted iteration budget is reported through `converged`.
FitResult fit(FitFamily family, std::span<const double> x, std::span<const double> y,
              std::vector<double> initial = {}, const FitOptions& options = {});

}  // namespace sfmb
