#include "sfmb/regime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sfmb {

namespace {

constexpr std::size_t kMinPoints = 8;
constexpr std::size_t kMinLow = 3;   // exp_gain has two coefficients
constexpr std::size_t kMinHigh = 2;  // power2 has one

double bic(double rss, std::size_t points, std::size_t params) {
  const double m = static_cast<double>(points);
  // The floor keeps exact fits comparable instead of sending ln(0) to -inf.
  const double floor = 1e-24 * m;
  return m * std::log(std::max(rss, floor) / m) + static_cast<double>(params) * std::log(m);
}

bool delays_fit_law(std::span<const double> alpha, std::span<const double> delay,
                    std::optional<FitResult>& out) {
  if (delay.size() < 3) return false;
  for (std::size_t i = 1; i < delay.size(); ++i) {
    if (!(delay[i] < delay[i - 1])) return false;
  }
  try {
    out = fit(FitFamily::delay_law, alpha, delay);
  } catch (const FitError&) {
    return false;
  }
  return out->converged && out->coefficients[0] > 0.0;
}

}  // namespace

std::string_view regime_name(Regime regime) {
  switch (regime) {
    case Regime::ase: return "ASE";
    case Regime::transition: return "transition";
    case Regime::sf: return "SF";
    case Regime::indeterminate: return "indeterminate";
  }
  return "?";
}

RegimeReport classify_regime(std::span<const double> alpha, std::span<const double> peak,
                             std::span<const double> delay) {
  RegimeReport report;
  const std::size_t m = alpha.size();
  report.labels.assign(m, Regime::indeterminate);
  if (m != peak.size() || m < kMinPoints) return report;
  if (!delay.empty() && delay.size() != m) return report;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(alpha[i] > 0.0) || !(peak[i] > 0.0) || !std::isfinite(peak[i])) return report;
    if (i > 0 && !(alpha[i] > alpha[i - 1])) return report;
  }
  if (alpha.back() < 10.0 * alpha.front()) return report;

  const FitOptions log_fit{.log_residuals = true};
  const FitResult whole = fit(FitFamily::exp_gain, alpha, peak, {}, log_fit);
  report.exponential_rss = whole.rss;

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t b = kMinLow; b + kMinHigh <= m; ++b) {
    const FitResult low = fit(FitFamily::exp_gain, alpha.first(b), peak.first(b), {}, log_fit);
    const FitResult high = fit(FitFamily::power2, alpha.subspan(b), peak.subspan(b), {}, log_fit);
    const double rss = low.rss + high.rss;
    if (low.converged && high.converged && rss < best) {
      best = rss;
      report.break_index = b;
      report.low_fit = low;
      report.high_fit = high;
    }
  }

  // Two segments cost three coefficients plus the break location.
  report.combined_rss = best;
  report.has_break = std::isfinite(best) && bic(best, m, 4) < bic(whole.rss, m, 2);
  if (!report.has_break) {
    report.overall = Regime::ase;
    report.low_fit = whole;
    report.high_fit.reset();
    report.break_index = m;
    std::fill(report.labels.begin(), report.labels.end(), Regime::ase);
    return report;
  }

  const std::size_t b = report.break_index;
  report.watershed_lo = alpha[b - 1];
  report.watershed_hi = alpha[b];
  Regime high = Regime::transition;
  if (delay.empty()) {
    high = Regime::sf;
  } else {
    report.delays_compatible = delays_fit_law(alpha.subspan(b), delay.subspan(b), report.delay_fit);
    if (report.delays_compatible) high = Regime::sf;
  }
  for (std::size_t i = 0; i < m; ++i) report.labels[i] = i < b ? Regime::ase : high;
  report.overall = Regime::transition;
  return report;
}

}  // namespace sfmb
