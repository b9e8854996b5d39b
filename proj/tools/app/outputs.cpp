#include "outputs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sfmb::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json interval(const Interval& i) { return json::array({i.lo, i.hi}); }

json histogram_json(const Histogram& h) { return {{"edges", h.edges}, {"counts", h.counts}}; }

json direction_json(const DirectionSummary& d) {
  return {{"threshold_probability", d.threshold_probability},
          {"threshold_ci95", interval(d.threshold_ci)},
          {"area_mean", d.area_mean},
          {"peak_mean", d.peak_mean},
          {"peak_std", d.peak_std},
          {"peak_ci95", interval(d.peak_ci)},
          {"delay_mean_ps", d.delay_mean},
          {"delay_std_ps", d.delay_std},
          {"delay_ci95", interval(d.delay_ci)},
          {"delay_count", d.delay_count},
          {"photon_histogram", histogram_json(d.photons)},
          {"delay_histogram", histogram_json(d.delays)}};
}

void histogram_rows(std::ostream& out, const char* kind, const char* dir, const Histogram& h) {
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out << kind << ',' << dir << ',' << num(h.edges[i]) << ',' << num(h.edges[i + 1]) << ','
        << h.counts[i] << '\n';
  }
}

}  // namespace

void write_json(const fs::path& path, const json& j) {
  auto out = open(path);
  out << j.dump(2) << '\n';
}

json fit_to_json(const FitResult& f) {
  json se = json::array();
  for (double v : f.standard_errors) se.push_back(finite_or_null(v));
  return {{"family", std::string(family_name(f.family))},
          {"coefficients", f.coefficients},
          {"standard_errors", se},
          {"rss", finite_or_null(f.rss)},
          {"iterations", f.iterations},
          {"converged", f.converged},
          {"message", f.message}};
}

json scalars_to_json(const RealizationScalars& s) {
  const auto delay = [](const std::optional<double>& d) { return d ? json(*d) : json(nullptr); };
  return {{"index", s.index},
          {"ok", s.ok},
          {"error", s.error},
          {"area_fwd", s.area_fwd},
          {"area_bwd", s.area_bwd},
          {"photons_fwd", s.photons_fwd},
          {"photons_bwd", s.photons_bwd},
          {"peak_fwd", s.peak_fwd},
          {"peak_bwd", s.peak_bwd},
          {"delay_fwd_ps", delay(s.delay_fwd)},
          {"delay_bwd_ps", delay(s.delay_bwd)}};
}

json summary_to_json(const EnsembleSpec& spec, const EnsembleSummary& e,
                     const std::vector<std::string>& warnings) {
  return {{"requested", e.requested},
          {"completed", e.completed},
          {"failed", e.failed},
          {"failed_too_often", e.failed_too_often()},
          {"master_seed", spec.master_seed},
          {"grid",
           {{"nz", spec.grid.nz}, {"dz_mm", spec.grid.dz}, {"dt_ps", spec.grid.dt},
            {"t_end_ps", spec.grid.t_end}, {"steps", spec.grid.n_steps}}},
          {"spectral_resolution_rad_per_ps", e.spectral_resolution},
          {"forward", direction_json(e.fwd)},
          {"backward", direction_json(e.bwd)},
          {"warnings", warnings}};
}

void write_ensemble(const fs::path& dir, const EnsembleSpec& spec, const EnsembleSummary& e,
                    const std::vector<std::string>& warnings) {
  write_json(dir / "summary.json", summary_to_json(spec, e, warnings));

  auto intensity = open(dir / "intensity.csv");
  intensity << "t_ps,I_fwd,I_bwd\n";
  for (std::size_t i = 0; i < e.time.size(); ++i) {
    intensity << num(e.time[i]) << ',' << num(e.fwd.mean_intensity[i]) << ','
              << num(e.bwd.mean_intensity[i]) << '\n';
  }

  auto spectrum = open(dir / "spectrum.csv");
  spectrum << "detuning_rad_per_ps,S_fwd,S_bwd\n";
  for (std::size_t i = 0; i < e.detuning.size(); ++i) {
    spectrum << num(e.detuning[i]) << ',' << num(e.fwd.mean_spectrum[i]) << ','
             << num(e.bwd.mean_spectrum[i]) << '\n';
  }

  auto hist = open(dir / "histograms.csv");
  hist << "kind,direction,lo,hi,count\n";
  histogram_rows(hist, "photons", "fwd", e.fwd.photons);
  histogram_rows(hist, "photons", "bwd", e.bwd.photons);
  histogram_rows(hist, "delay", "fwd", e.fwd.delays);
  histogram_rows(hist, "delay", "bwd", e.bwd.delays);

  auto rows = open(dir / "realizations.csv");
  rows << "index,ok,area_fwd,area_bwd,photons_fwd,photons_bwd,peak_fwd,peak_bwd,delay_fwd_ps,"
          "delay_bwd_ps,max_trace_error,error\n";
  for (const RealizationScalars& s : e.realizations) {
    rows << s.index << ',' << (s.ok ? 1 : 0) << ',' << num(s.area_fwd) << ',' << num(s.area_bwd)
         << ',' << num(s.photons_fwd) << ',' << num(s.photons_bwd) << ',' << num(s.peak_fwd) << ','
         << num(s.peak_bwd) << ',' << opt(s.delay_fwd) << ',' << opt(s.delay_bwd) << ','
         << num(s.trace_error) << ',' << '"' << s.error << '"' << '\n';
  }
}

}  // namespace sfmb::app
