#include "sfmb/fitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sfmb {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double delay_shape(double x) {
  const double h = 0.5 * std::log(2.0 * std::numbers::pi * x);
  return h * h / x;
}

// Gradient of the model with respect to the coefficients at x.
Eigen::VectorXd gradient(FitFamily family, const Eigen::VectorXd& c, double x) {
  Eigen::VectorXd g(c.size());
  switch (family) {
    case FitFamily::exp_gain: {
      const double e = std::exp(c[1] * x);
      g << e, c[0] * x * e;
      break;
    }
    case FitFamily::power2: g << x * x; break;
    case FitFamily::power_law: {
      const double p = std::pow(x, c[1]);
      g << p, c[0] * p * std::log(x);
      break;
    }
    case FitFamily::delay_law: g << delay_shape(x), 1.0; break;
    case FitFamily::pump_decay: {
      const double e = std::exp(-c[1] * x);
      g << e, -c[0] * x * e;
      break;
    }
    case FitFamily::exp_linear: {
      const double e = std::exp(-c[2] * x);
      g << 1.0, e, -c[1] * x * e, x;
      break;
    }
  }
  return g;
}

struct Problem {
  FitFamily family;
  std::span<const double> x, y;
  bool log_residuals;

  // Returns false when a log residual is undefined (model <= 0).
  bool residuals(const Eigen::VectorXd& c, Eigen::VectorXd& r, Eigen::MatrixXd* jac) const {
    const auto m = static_cast<Eigen::Index>(x.size());
    r.resize(m);
    if (jac) jac->resize(m, c.size());
    for (Eigen::Index i = 0; i < m; ++i) {
      const double model = evaluate(family, {c.data(), static_cast<std::size_t>(c.size())}, x[i]);
      if (!std::isfinite(model)) return false;
      if (log_residuals) {
        if (model <= 0.0) return false;
        r[i] = std::log(model) - std::log(y[i]);
        if (jac) jac->row(i) = gradient(family, c, x[i]).transpose() / model;
      } else {
        r[i] = model - y[i];
        if (jac) jac->row(i) = gradient(family, c, x[i]).transpose();
      }
    }
    return r.allFinite();
  }
};

// Ordinary least squares of y on the columns of A.
Eigen::VectorXd linear_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  return a.colPivHouseholderQr().solve(y);
}

}  // namespace

std::string_view family_name(FitFamily family) {
  switch (family) {
    case FitFamily::exp_gain: return "exp_gain";
    case FitFamily::power2: return "power2";
    case FitFamily::power_law: return "power_law";
    case FitFamily::delay_law: return "delay_law";
    case FitFamily::pump_decay: return "pump_decay";
    case FitFamily::exp_linear: return "exp_linear";
  }
  return "?";
}

FitFamily family_from_name(std::string_view name) {
  for (auto f : {FitFamily::exp_gain, FitFamily::power2, FitFamily::power_law,
                 FitFamily::delay_law, FitFamily::pump_decay, FitFamily::exp_linear}) {
    if (family_name(f) == name) return f;
  }
  throw FitError("unknown fit family '" + std::string(name) + "'");
}

std::size_t coefficient_count(FitFamily family) {
  switch (family) {
    case FitFamily::power2: return 1;
    case FitFamily::exp_linear: return 4;
    default: return 2;
  }
}

double evaluate(FitFamily family, std::span<const double> c, double x) {
  switch (family) {
    case FitFamily::exp_gain: return c[0] * std::exp(c[1] * x);
    case FitFamily::power2: return c[0] * x * x;
    case FitFamily::power_law: return c[0] * std::pow(x, c[1]);
    case FitFamily::delay_law: return c[0] * delay_shape(x) + c[1];
    case FitFamily::pump_decay: return c[0] * std::exp(-c[1] * x);
    case FitFamily::exp_linear: return c[0] + c[1] * std::exp(-c[2] * x) + c[3] * x;
  }
  return kNan;
}

std::vector<double> initial_guess(FitFamily family, std::span<const double> x,
                                  std::span<const double> y, bool log_residuals) {
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::VectorXd yv(m);
  for (Eigen::Index i = 0; i < m; ++i) yv[i] = y[i];

  // ln y = ln a + k u, where u is x or ln x.
  const auto log_linear = [&](bool log_x) {
    Eigen::MatrixXd a(m, 2);
    Eigen::VectorXd ly(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      a(i, 0) = 1.0;
      a(i, 1) = log_x ? std::log(x[i]) : x[i];
      ly[i] = std::log(std::max(std::abs(y[i]), std::numeric_limits<double>::min()));
    }
    const Eigen::VectorXd s = linear_solve(a, ly);
    const double sign = yv.sum() < 0.0 ? -1.0 : 1.0;
    return std::pair{sign * std::exp(s[0]), s[1]};
  };

  switch (family) {
    case FitFamily::exp_gain: {
      auto [a, k] = log_linear(false);
      return {a, k};
    }
    case FitFamily::pump_decay: {
      auto [a, k] = log_linear(false);
      return {a, -k};
    }
    case FitFamily::power_law: {
      auto [a, k] = log_linear(true);
      return {a, k};
    }
    case FitFamily::power2: {
      if (log_residuals) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) s += std::log(y[i] / (x[i] * x[i]));
        return {std::exp(s / static_cast<double>(m))};
      }
      double num = 0.0, den = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        num += y[i] * x[i] * x[i];
        den += std::pow(x[i], 4);
      }
      return {num / den};
    }
    case FitFamily::delay_law: {
      Eigen::MatrixXd a(m, 2);
      for (Eigen::Index i = 0; i < m; ++i) a.row(i) << delay_shape(x[i]), 1.0;
      const Eigen::VectorXd s = linear_solve(a, yv);
      return {s[0], s[1]};
    }
    case FitFamily::exp_linear: {
      // For fixed f the model is linear in (a, b, g); scan f on a log grid.
      const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
      const double span = std::max(*hi - *lo, std::numeric_limits<double>::min());
      std::vector<double> best;
      double best_rss = std::numeric_limits<double>::infinity();
      for (int j = -40; j <= 40; ++j) {
        const double f = std::pow(10.0, j / 20.0) / span;
        Eigen::MatrixXd a(m, 3);
        for (Eigen::Index i = 0; i < m; ++i) a.row(i) << 1.0, std::exp(-f * x[i]), x[i];
        const Eigen::VectorXd s = linear_solve(a, yv);
        const double rss = (a * s - yv).squaredNorm();
        if (s.allFinite() && rss < best_rss) {
          best_rss = rss;
          best = {s[0], s[1], f, s[2]};
        }
      }
      return best;
    }
  }
  return {};
}

FitResult fit(FitFamily family, std::span<const double> x, std::span<const double> y,
              std::vector<double> initial, const FitOptions& options) {
  const std::size_t n = coefficient_count(family);
  if (x.size() != y.size()) throw FitError("x and y differ in length");
  if (x.size() < n + 1) {
    throw FitError(std::string(family_name(family)) + " needs at least " + std::to_string(n + 1) +
                   " points, got " + std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw FitError("non-finite data point");
    if (options.log_residuals && !(y[i] > 0.0)) throw FitError("log residuals need y > 0");
    if ((family == FitFamily::power_law || family == FitFamily::delay_law) && !(x[i] > 0.0)) {
      throw FitError(std::string(family_name(family)) + " needs x > 0");
    }
  }
  if (initial.empty()) initial = initial_guess(family, x, y, options.log_residuals);
  if (initial.size() != n) throw FitError("initial guess has the wrong number of coefficients");

  const Problem problem{family, x, y, options.log_residuals};
  FitResult result;
  result.family = family;

  Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(initial.data(), static_cast<Eigen::Index>(n));
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  if (!problem.residuals(c, r, &jac)) {
    result.coefficients = initial;
    result.standard_errors.assign(n, kNan);
    result.rss = kNan;
    result.message = "model undefined at the initial guess";
    return result;
  }
  double rss = r.squaredNorm();
  double lambda = 1e-3;
  result.rss_history.push_back(rss);

  for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
    if (rss == 0.0) {
      result.converged = true;
      break;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    Eigen::VectorXd scale = jtj.diagonal().cwiseMax(1e-300);

    bool accepted = false;
    bool finished = false;
    while (lambda < 1e16) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * scale;
      const Eigen::VectorXd delta = a.ldlt().solve(-jtr);
      if (!delta.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      const Eigen::VectorXd trial = c + delta;
      Eigen::VectorXd r_trial;
      Eigen::MatrixXd jac_trial;
      if (problem.residuals(trial, r_trial, &jac_trial)) {
        const double rss_trial = r_trial.squaredNorm();
        if (rss_trial <= rss) {
          const double change = (rss - rss_trial) / std::max(rss, std::numeric_limits<double>::min());
          const bool tiny_step = delta.norm() <= 1e-15 * (c.norm() + 1e-300);
          c = trial;
          r = std::move(r_trial);
          jac = std::move(jac_trial);
          rss = rss_trial;
          result.rss_history.push_back(rss);
          lambda = std::max(lambda / 10.0, 1e-12);
          accepted = true;
          finished = change < options.tolerance || tiny_step;
          break;
        }
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      // No downhill step at any damping: a (numerically) stationary point.
      finished = true;
    }
    if (finished) {
      result.converged = true;
      ++result.iterations;
      break;
    }
  }
  if (!result.converged) result.message = "iteration limit reached";

  result.coefficients.assign(c.data(), c.data() + n);
  result.rss = rss;
  result.standard_errors.assign(n, kNan);

  // Rank and covariance on the unit-diagonal normal matrix, so coefficient
  // scale does not masquerade as degeneracy.
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  const Eigen::VectorXd diag = jtj.diagonal();
  const bool zero_column = (diag.array() <= 0.0).any();
  const Eigen::VectorXd d = diag.cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd normalized = d.asDiagonal() * jtj * d.asDiagonal();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(normalized);
  if (!c.allFinite()) {
    result.converged = false;
    result.message = "non-finite coefficients";
  } else if (zero_column || lu.rank() < static_cast<Eigen::Index>(n)) {
    result.converged = false;
    result.message = "singular Jacobian";
  } else {
    const std::size_t dof = x.size() - n;
    const double s2 = rss / static_cast<double>(dof);
    const Eigen::MatrixXd cov = d.asDiagonal() * lu.inverse() * d.asDiagonal() * s2;
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      result.standard_errors[i] = std::sqrt(std::max(0.0, cov(k, k)));
    }
  }
  return result;
}

}  // namespace sfmb
