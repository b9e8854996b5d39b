#include "plan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "outputs.hpp"
#include "sfmb/ensemble.hpp"
#include "sfmb/error.hpp"
#include "sfmb/fitting.hpp"
#include "sfmb/oracle.hpp"
#include "sfmb/record_io.hpp"
#include "sfmb/solver.hpp"

namespace sfmb::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::pair<PlanKind, std::string>>& kind_names() {
  static const std::vector<std::pair<PlanKind, std::string>> names{
      {PlanKind::single, "single"},       {PlanKind::ensemble, "ensemble"},
      {PlanKind::sweep_Ln, "sweep_Ln"},   {PlanKind::sweep_rNp, "sweep_rNp"},
      {PlanKind::sweep_L, "sweep_L"},     {PlanKind::sweep_Tp, "sweep_Tp"},
      {PlanKind::oracle, "oracle"},       {PlanKind::fit, "fit"}};
  return names;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> expected_axes(PlanKind kind) {
  switch (kind) {
    case PlanKind::sweep_Ln: return {"L_mm", "n_per_mm3"};
    case PlanKind::sweep_rNp: return {"r_um", "np_photons"};
    case PlanKind::sweep_L: return {"L_mm"};
    case PlanKind::sweep_Tp: return {"T_p_fs", "Q"};
    default: return {};
  }
}

std::size_t worker_count(const ExperimentPlan& plan) {
  if (plan.workers > 0) return plan.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

EnsembleSpec ensemble_spec(const ExperimentPlan& plan, const Scenario& s) {
  EnsembleSpec spec;
  spec.scenario = s;
  spec.grid = make_grid(s, derive(s));
  spec.master_seed = plan.master_seed;
  spec.realizations = plan.realizations;
  spec.workers = worker_count(plan);
  return spec;
}

// Runs one ensemble into `dir`; returns the summary for map assembly.
EnsembleSummary ensemble_point(const ExperimentPlan& plan, const KeyValues& kv, const fs::path& dir) {
  const Scenario s = scenario_from_key_values(kv);
  const EnsembleSpec spec = ensemble_spec(plan, s);
  EnsembleSummary summary = run_ensemble(spec);
  fs::create_directories(dir);
  write_ensemble(dir, spec, summary, model_warnings(s));
  return summary;
}

json oracle_report(const Scenario& s) {
  const DerivedParams d = derive(s);
  json j;
  j["alpha"] = d.alpha;
  j["eta_per_ps_mm"] = d.eta;
  j["phi_urad"] = d.phi * 1e6;
  j["fresnel"] = d.fresnel;
  j["gain_length_pump_mm"] = d.gain_length_pump;
  j["gain_length_decay_mm"] = d.gain_length_decay;
  j["noise_prefactor_per_ps"] = d.noise_prefactor;
  j["u"] = oracle::u_factor(s);
  j["two_xi_limit"] = oracle::gain_exponent_limit(
      oracle::u_factor(s) * s.pump.duration * s.transition.gamma, 0.5);
  j["pi_half_photons"] = oracle::pi_half_photons(s.medium.radius, s.transition.wavelength);
  j["gamma_from_dipole_per_ps"] = gamma_from_dipole(s.transition.dipole, s.transition.omega);
  j["pump_peak_per_s_m2"] =
      pump_boundary(s.pump.arrival, s.pump, s.medium) * 1e12 * 1e6;
  j["pump_attenuation"] = std::exp(-s.medium.density * s.medium.sigma * s.medium.length);
  j["closed_form_valid"] = oracle::closed_form_valid(s);
  return j;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("data", "cannot read " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

int run_fit(const ExperimentPlan& plan, std::ostream& log) {
  const auto rows = read_csv(plan.fit_data);
  if (rows.size() < 2) throw ConfigError("data", "needs a header and at least one row");
  const auto column = [&](const std::string& name) {
    const auto it = std::find(rows[0].begin(), rows[0].end(), name);
    if (it == rows[0].end()) throw ConfigError("data", "no column '" + name + "'");
    return static_cast<std::size_t>(it - rows[0].begin());
  };
  const std::size_t cx = column(plan.fit_x);
  const std::size_t cy = column(plan.fit_y);
  std::vector<double> x, y;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() <= std::max(cx, cy) || rows[r][cy].empty()) continue;
    try {
      x.push_back(std::stod(rows[r][cx]));
      y.push_back(std::stod(rows[r][cy]));
    } catch (const std::exception&) {
      throw ConfigError("data", "row " + std::to_string(r + 1) + " is not numeric");
    }
  }
  FitResult result;
  try {
    result = fit(family_from_name(plan.fit_family), x, y, {}, FitOptions{.log_residuals = plan.fit_log});
  } catch (const FitError& e) {
    throw ConfigError("fit", e.what());
  }
  const json j = fit_to_json(result);
  write_json(plan.output / "fit.json", j);
  log << j.dump(2) << '\n';
  return result.converged ? 0 : 3;
}

// Maximum of rho22 - rho11 at z = 0 for every (T_p, Q), with the quadrature
// value alongside and a pump_decay fit per Q.
int run_tp_sweep(const ExperimentPlan& plan, std::ostream& log) {
  const auto& tps = plan.axes[0].values;
  const auto& qs = plan.axes[1].values;
  std::ofstream csv(plan.output / "tp_scan.csv");
  csv << "Q,T_p_fs,max_inversion,quadrature_max_inversion\n";
  json fits = json::array();
  int code = 0;
  for (double q : qs) {
    std::vector<double> maxima;
    for (double tp : tps) {
      KeyValues kv = plan.scenario;
      kv["tau_p_fs"] = number(tp);
      kv["np_photons"] = number(q * tp * 1e12);
      kv["noise"] = "off";
      const Scenario s = scenario_from_key_values(kv);
      const RunRecord r = run(s, make_grid(s, derive(s)), NoiseSpec{plan.master_seed, 0, false});
      const double solver_max = *std::max_element(r.inversion_in.begin(), r.inversion_in.end());
      double quad_max = -1.0;
      for (double t : r.time) quad_max = std::max(quad_max, oracle::inversion_quadrature(t, s));
      maxima.push_back(solver_max);
      csv << number(q) << ',' << number(tp) << ',' << number(solver_max) << ',' << number(quad_max) << '\n';
      log << "Q=" << q << " T_p=" << tp << " fs: max inversion " << solver_max << '\n';
    }
    json entry;
    entry["Q"] = q;
    try {
      const FitResult f = fit(FitFamily::pump_decay, tps, maxima);
      entry["fit"] = fit_to_json(f);
      if (!f.converged) code = 3;
    } catch (const FitError& e) {
      entry["error"] = e.what();
      code = 3;
    }
    fits.push_back(entry);
  }
  write_json(plan.output / "fits.json", fits);
  return code;
}

int run_grid_sweep(const ExperimentPlan& plan, std::ostream& log) {
  const Axis& a = plan.axes[0];
  const Axis single{"", {0.0}};
  const Axis& b = plan.axes.size() > 1 ? plan.axes[1] : single;
  std::ofstream map(plan.output / "map.csv");
  map << a.key << ',' << (b.key.empty() ? "unused" : b.key)
      << ",alpha,p_fwd,p_fwd_lo,p_fwd_hi,p_bwd,p_bwd_lo,p_bwd_hi,peak_fwd_mean,peak_bwd_mean,"
         "delay_fwd_mean,delay_bwd_mean,completed,failed,status\n";
  int code = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    for (std::size_t j = 0; j < b.values.size(); ++j) {
      KeyValues kv = plan.scenario;
      if (plan.kind == PlanKind::sweep_Ln) {
        kv["L_mm"] = number(a.values[i]);
        set_density_per_mm3(kv, b.values[j]);
      } else if (plan.kind == PlanKind::sweep_rNp) {
        kv["r_um"] = number(a.values[i]);
        kv["np_photons"] = number(b.values[j]);
      } else {
        kv["L_mm"] = number(a.values[i]);
        const double sigma_r = std::stod(kv.at("sigma_r_m2")) * 1e6;
        set_density_per_mm3(kv, plan.alpha / (sigma_r * a.values[i]));
      }
      char name[64];
      std::snprintf(name, sizeof name, "point_%03zu_%03zu", i, j);
      map << number(a.values[i]) << ',' << number(b.values[j]) << ',';
      try {
        const Scenario s = scenario_from_key_values(kv);
        const EnsembleSummary e = ensemble_point(plan, kv, plan.output / name);
        map << number(derive(s).alpha) << ',' << number(e.fwd.threshold_probability) << ','
            << number(e.fwd.threshold_ci.lo) << ',' << number(e.fwd.threshold_ci.hi) << ','
            << number(e.bwd.threshold_probability) << ',' << number(e.bwd.threshold_ci.lo) << ','
            << number(e.bwd.threshold_ci.hi) << ',' << number(e.fwd.peak_mean) << ','
            << number(e.bwd.peak_mean) << ',' << number(e.fwd.delay_mean) << ','
            << number(e.bwd.delay_mean) << ',' << e.completed << ',' << e.failed << ','
            << (e.failed_too_often() ? "failed" : "ok") << '\n';
        if (e.failed_too_often()) code = 3;
        log << name << ": P+ = " << e.fwd.threshold_probability
            << ", P- = " << e.bwd.threshold_probability << '\n';
      } catch (const std::exception& ex) {
        map << ",,,,,,,,,,,0,0,error: " << ex.what() << '\n';
        log << name << ": error: " << ex.what() << '\n';
        code = 3;
      }
    }
  }
  return code;
}

}  // namespace

std::string plan_kind_name(PlanKind kind) {
  for (const auto& [k, n] : kind_names()) {
    if (k == kind) return n;
  }
  return "?";
}

PlanKind plan_kind_from_name(const std::string& name) {
  for (const auto& [k, n] : kind_names()) {
    if (n == name) return k;
  }
  throw ConfigError("kind", "unknown plan kind '" + name + "'");
}

std::size_t parse_realizations(const std::string& text) {
  if (text == "desk") return kDeskRealizations;
  if (text == "paper") return kPaperRealizations;
  std::size_t pos = 0;
  long long n = 0;
  try {
    n = std::stoll(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || n <= 0) {
    throw ConfigError("realizations", "expected desk, paper or a positive integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(n);
}

void set_density_per_mm3(KeyValues& kv, double density) {
  kv.erase("n_per_cm3");
  kv["n_per_mm3"] = number(density);
}

ExperimentPlan plan_from_json(const json& j, const fs::path& base) {
  if (!j.is_object()) throw ConfigError("plan", "expected a JSON object");
  ExperimentPlan plan;
  const auto get = [&](const char* key) -> const json* {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  };
  try {
    if (!get("kind")) throw ConfigError("kind", "missing");
    plan.kind = plan_kind_from_name(get("kind")->get<std::string>());

    if (const json* s = get("scenario")) {
      if (s->is_string()) {
        fs::path p = s->get<std::string>();
        if (p.is_relative()) p = base / p;
        plan.scenario_source = p.string();
        std::ifstream in(p);
        if (!in) throw ConfigError("scenario", "cannot read " + p.string());
        std::stringstream text;
        text << in.rdbuf();
        plan.scenario = parse_key_values(text.str());
      } else if (s->is_object()) {
        for (const auto& [k, v] : s->items()) plan.scenario[k] = v.get<std::string>();
      } else {
        throw ConfigError("scenario", "expected a path or an object of key-values");
      }
    }
    if (const json* o = get("overrides")) {
      for (const auto& [k, v] : o->items()) {
        plan.scenario[k] = v.is_string() ? v.get<std::string>() : number(v.get<double>());
        if (k == "n_per_mm3") plan.scenario.erase("n_per_cm3");
        if (k == "n_per_cm3") plan.scenario.erase("n_per_mm3");
      }
    }
    if (const json* v = get("scenario_source")) plan.scenario_source = v->get<std::string>();
    if (const json* axes = get("axes")) {
      for (const json& a : *axes) {
        plan.axes.push_back({a.at("key").get<std::string>(), a.at("values").get<std::vector<double>>()});
      }
    }
    if (const json* v = get("alpha")) plan.alpha = v->get<double>();
    if (const json* v = get("output")) {
      plan.output = v->get<std::string>();  // relative to the working directory
    }
    if (const json* v = get("master_seed")) plan.master_seed = v->get<std::uint64_t>();
    if (const json* v = get("workers")) plan.workers = v->get<std::size_t>();
    if (const json* v = get("realizations")) {
      plan.realizations = v->is_string() ? parse_realizations(v->get<std::string>())
                                         : v->get<std::size_t>();
    }
    if (const json* v = get("fit_family")) plan.fit_family = v->get<std::string>();
    if (const json* v = get("fit_data")) {
      plan.fit_data = v->get<std::string>();
      if (plan.fit_data.is_relative() && !base.empty()) plan.fit_data = base / plan.fit_data;
    }
    if (const json* v = get("fit_x")) plan.fit_x = v->get<std::string>();
    if (const json* v = get("fit_y")) plan.fit_y = v->get<std::string>();
    if (const json* v = get("fit_log")) plan.fit_log = v->get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError("plan", e.what());
  }
  return plan;
}

json plan_to_json(const ExperimentPlan& plan) {
  json j;
  j["kind"] = plan_kind_name(plan.kind);
  json scenario = json::object();
  for (const auto& [k, v] : plan.scenario) scenario[k] = v;
  j["scenario"] = scenario;
  if (!plan.scenario_source.empty()) j["scenario_source"] = plan.scenario_source;
  json axes = json::array();
  for (const Axis& a : plan.axes) axes.push_back({{"key", a.key}, {"values", a.values}});
  j["axes"] = axes;
  if (plan.kind == PlanKind::sweep_L) j["alpha"] = plan.alpha;
  j["output"] = plan.output.string();
  j["master_seed"] = plan.master_seed;
  j["workers"] = plan.workers;
  j["realizations"] = plan.realizations;
  if (plan.kind == PlanKind::fit) {
    j["fit_family"] = plan.fit_family;
    j["fit_data"] = plan.fit_data.string();
    j["fit_x"] = plan.fit_x;
    j["fit_y"] = plan.fit_y;
    j["fit_log"] = plan.fit_log;
  }
  return j;
}

ExperimentPlan load_plan(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("plan", "cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("plan", e.what());
  }
  return plan_from_json(j, path.parent_path());
}

void check_plan(const ExperimentPlan& plan) {
  if (plan.output.empty()) throw ConfigError("output", "no output directory");
  if (plan.kind == PlanKind::fit) {
    try {
      family_from_name(plan.fit_family);
    } catch (const FitError& e) {
      throw ConfigError("fit_family", e.what());
    }
    if (plan.fit_data.empty()) throw ConfigError("fit_data", "missing");
  } else {
    if (plan.scenario.empty()) throw ConfigError("scenario", "missing");
    scenario_from_key_values(plan.scenario);
  }
  if (plan.realizations == 0) throw ConfigError("realizations", "must be positive");

  const auto names = expected_axes(plan.kind);
  if (plan.axes.size() != names.size()) {
    throw ConfigError("axes", plan_kind_name(plan.kind) + " needs " + std::to_string(names.size()) +
                                  " axes");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    const Axis& a = plan.axes[i];
    if (a.key != names[i]) throw ConfigError("axes", "axis " + std::to_string(i) + " must be " + names[i]);
    if (a.values.empty()) throw ConfigError(a.key, "sweep grid is empty");
    for (std::size_t k = 0; k < a.values.size(); ++k) {
      if (!std::isfinite(a.values[k]) || a.values[k] <= 0.0) throw ConfigError(a.key, "values must be positive");
      if (k > 0 && !(a.values[k] > a.values[k - 1])) throw ConfigError(a.key, "grid must be strictly increasing");
    }
  }
  if (plan.kind == PlanKind::sweep_L && !(plan.alpha > 0.0)) throw ConfigError("alpha", "must be > 0");

  std::error_code ec;
  fs::create_directories(plan.output, ec);
  const fs::path probe = plan.output / ".write_test";
  std::ofstream test(probe);
  if (ec || !test) throw ConfigError("output", "cannot write to " + plan.output.string());
  test.close();
  fs::remove(probe, ec);
}

ValidationReport validate_key_values(const KeyValues& kv) {
  ValidationReport report;
  try {
    const Scenario s = scenario_from_key_values(kv);
    const DerivedParams d = derive(s);
    report.warnings = model_warnings(s);
    const double pump_limit = s.pump.duration / 20.0;
    const double decay_limit = s.transition.tau2() / 50.0;
    const GridSpec grid = make_grid(s, d);
    std::ostringstream os;
    os << "grid: nz = " << grid.nz << ", dt = " << grid.dt << " ps (tau_p/20 = " << pump_limit
       << ", tau2/50 = " << decay_limit << "), " << grid.n_steps << " steps to t = " << grid.t_end
       << " ps";
    report.info.push_back(os.str());
    if (grid.nodes() * grid.n_steps > 2'000'000'000ULL) {
      report.warnings.push_back("grid has more than 2e9 node updates per realization");
    }
    std::ostringstream dp;
    dp << "alpha = " << d.alpha << ", eta = " << d.eta << " /(ps mm), phi = " << d.phi * 1e6
       << " urad, Fresnel = " << d.fresnel << ", L_g(tau_p) = " << d.gain_length_pump
       << " mm, L_g(tau2) = " << d.gain_length_decay << " mm";
    report.info.push_back(dp.str());
  } catch (const ConfigError& e) {
    report.errors.push_back(e.what());
  }
  return report;
}

ValidationReport validate_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    ValidationReport r;
    r.errors.push_back("cannot read " + path.string());
    return r;
  }
  std::stringstream text;
  text << in.rdbuf();
  try {
    return validate_key_values(parse_key_values(text.str()));
  } catch (const ConfigError& e) {
    ValidationReport r;
    r.errors.push_back(e.what());
    return r;
  }
}

int run_plan(const ExperimentPlan& plan, std::ostream& log) {
  check_plan(plan);
  write_json(plan.output / "manifest.json", plan_to_json(plan));

  switch (plan.kind) {
    case PlanKind::fit: return run_fit(plan, log);
    case PlanKind::oracle: {
      const json j = oracle_report(scenario_from_key_values(plan.scenario));
      write_json(plan.output / "oracle.json", j);
      log << j.dump(2) << '\n';
      return 0;
    }
    case PlanKind::single: {
      const Scenario s = scenario_from_key_values(plan.scenario);
      const GridSpec grid = make_grid(s, derive(s));
      try {
        const RunRecord r = run(s, grid, NoiseSpec{plan.master_seed, 0, true});
        write_record_csv(plan.output / "record.csv", r);
        if (s.sim.snapshot_stride > 0) write_snapshots_csv(plan.output / "snapshots.csv", r.snapshots, grid.dz);
        json j = scalars_to_json(extract_scalars(s, r));
        j["grid"] = {{"nz", grid.nz}, {"dz_mm", grid.dz}, {"dt_ps", grid.dt}, {"t_end_ps", grid.t_end}};
        j["max_trace_error"] = r.diagnostics.max_trace_error;
        write_json(plan.output / "run.json", j);
        log << j.dump(2) << '\n';
      } catch (const NumericalError& e) {
        log << "run failed: " << e.what() << '\n';
        return 3;
      }
      return 0;
    }
    case PlanKind::ensemble: {
      const EnsembleSummary e = ensemble_point(plan, plan.scenario, plan.output);
      log << "completed " << e.completed << "/" << e.requested << ", P+ = " << e.fwd.threshold_probability
          << ", P- = " << e.bwd.threshold_probability << '\n';
      return e.failed_too_often() ? 3 : 0;
    }
    case PlanKind::sweep_Tp: return run_tp_sweep(plan, log);
    case PlanKind::sweep_Ln:
    case PlanKind::sweep_rNp:
    case PlanKind::sweep_L: return run_grid_sweep(plan, log);
  }
  return 3;
}

}  // namespace sfmb::app
