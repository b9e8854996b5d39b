#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sfmb/fitting.hpp"

namespace sfmb {

enum class Regime { ase, transition, sf, indeterminate };

std::string_view regime_name(Regime regime);

struct RegimeReport {
  Regime overall = Regime::indeterminate;
  std::vector<Regime> labels;  // one per input point
  bool has_break = false;
  std::size_t break_index = 0;  // first point of the high segment
  double watershed_lo = 0.0;    // alpha of the last low-segment point
  double watershed_hi = 0.0;    // alpha of the first high-segment point
  double combined_rss = 0.0;    // log-space residual of the two-segment model
  double exponential_rss = 0.0; // log-space residual of one exponential
  std::optional<FitResult> low_fit;     // exp_gain
  std::optional<FitResult> high_fit;    // power2
  std::optional<FitResult> delay_fit;   // delay_law on the high segment
  bool delays_compatible = false;
};

/// Splits peak intensity against alpha into an exponential (ASE) segment and
/// an alpha^2 segment. Both segments are fitted to ln(peak), the break is the
/// one with the smallest combined residual, and the split is kept only when it
/// beats a single exponential by the Bayesian information criterion. The
/// high segment is labelled SF when mean delays there (if given) decrease and
/// fit delay_law with a positive scale; otherwise it is labelled transition.
/// Fewer than 8 points, under one decade of alpha or non-positive peaks give
/// an indeterminate report.
RegimeReport classify_regime(std::span<const double> alpha, std::span<const double> peak,
                             std::span<const double> delay = {});

}  // namespace sfmb
