#include "sfmb/scenario_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "sfmb/error.hpp"

namespace sfmb {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& key, const std::string& raw) {
  double value = 0.0;
  const char* begin = raw.data();
  const char* end = raw.data() + raw.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "not a number: '" + raw + "'");
  return value;
}

bool parse_switch(const std::string& key, const std::string& raw) {
  if (raw == "on" || raw == "true" || raw == "1") return true;
  if (raw == "off" || raw == "false" || raw == "0") return false;
  throw ConfigError(key, "expected on/off, got '" + raw + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Every accepted key. Anything else in a scenario file is an error.
const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "name",         "tau2_ps",      "gamma_THz",       "lambda_nm",
      "omega_rad_THz", "d_Cm",        "sigma_r_m2",      "n_per_cm3",
      "n_per_mm3",    "L_mm",         "sigma_m2",        "r_um",
      "np_photons",   "tau_p_fs",     "tau_i_ps",        "initial_state",
      "pump",         "noise",        "grid_nz",         "t_end_ps",
      "snapshot_stride", "probe_amplitude_rad_per_ps", "probe_center_ps", "probe_width_ps",
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(const KeyValues& values) : values_(values) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  double number(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(key, "missing required key");
    return parse_number(key, it->second);
  }

  const std::string& raw(const std::string& key) const { return values_.at(key); }

 private:
  const KeyValues& values_;
};

double exactly_one_of(const Reader& in, const std::string& a, const std::string& b,
                      double scale_a, double scale_b) {
  const bool has_a = in.has(a);
  const bool has_b = in.has(b);
  if (has_a && has_b) throw ConfigError(a, "give either " + a + " or " + b + ", not both");
  if (!has_a && !has_b) throw ConfigError(a, "missing required key (or " + b + ")");
  return has_a ? in.number(a) * scale_a : in.number(b) * scale_b;
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    std::string key = trim(std::string_view(stripped).substr(0, eq));
    std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
    if (!out.emplace(key, value).second) throw ConfigError(key, "duplicate key");
  }
  return out;
}

Scenario scenario_from_key_values(const KeyValues& values) {
  for (const auto& [key, value] : values) {
    if (!known_keys().count(key)) throw ConfigError(key, "unknown key");
  }
  const Reader in(values);
  Scenario s;

  // SI and cgs units from the parameter tables convert to mm / ps here.
  if (in.has("tau2_ps") && in.has("gamma_THz")) {
    throw ConfigError("tau2_ps", "give either tau2_ps or gamma_THz, not both");
  }
  if (in.has("gamma_THz")) {
    s.transition.gamma = in.number("gamma_THz");
  } else {
    const double tau2 = in.number("tau2_ps");
    if (!(tau2 > 0.0)) throw ConfigError("tau2_ps", "must be > 0");
    s.transition.gamma = 1.0 / tau2;
  }
  s.transition.wavelength = in.number("lambda_nm") * 1e-6;
  s.transition.omega = in.number("omega_rad_THz");
  s.transition.dipole = in.number("d_Cm");
  s.transition.sigma_r = in.number("sigma_r_m2") * 1e6;

  s.medium.density = exactly_one_of(in, "n_per_mm3", "n_per_cm3", 1.0, 1e-3);
  s.medium.length = in.number("L_mm");
  s.medium.sigma = in.number("sigma_m2") * 1e6;
  s.medium.radius = in.number("r_um") * 1e-3;

  s.pump.photons = in.number("np_photons");
  s.pump.duration = in.number("tau_p_fs") * 1e-3;
  s.pump.arrival = in.number("tau_i_ps");

  if (in.has("initial_state")) {
    const std::string& v = in.raw("initial_state");
    if (v == "ground") {
      s.sim.initial = InitialState::ground;
    } else if (v == "inverted") {
      s.sim.initial = InitialState::inverted;
    } else if (v == "absorber") {
      s.sim.initial = InitialState::absorber;
    } else {
      throw ConfigError("initial_state", "expected ground, inverted or absorber");
    }
  }
  if (in.has("pump")) s.sim.pump_enabled = parse_switch("pump", in.raw("pump"));
  if (in.has("noise")) s.sim.noise_enabled = parse_switch("noise", in.raw("noise"));
  if (in.has("grid_nz")) {
    const double nz = in.number("grid_nz");
    if (!(nz >= 1.0) || nz != static_cast<double>(static_cast<std::size_t>(nz))) {
      throw ConfigError("grid_nz", "must be a positive integer");
    }
    s.sim.grid_nz = static_cast<std::size_t>(nz);
  }
  if (in.has("t_end_ps")) {
    const double t_end = in.number("t_end_ps");
    if (!(t_end > 0.0)) throw ConfigError("t_end_ps", "must be > 0");
    s.sim.t_end = t_end;
  }
  if (in.has("snapshot_stride")) {
    const double stride = in.number("snapshot_stride");
    if (!(stride >= 0.0)) throw ConfigError("snapshot_stride", "must be >= 0");
    s.sim.snapshot_stride = static_cast<std::size_t>(stride);
  }
  if (in.has("probe_amplitude_rad_per_ps")) {
    s.sim.probe.amplitude = in.number("probe_amplitude_rad_per_ps");
    s.sim.probe.center = in.number("probe_center_ps");
    s.sim.probe.width = in.number("probe_width_ps");
    if (!(s.sim.probe.width > 0.0)) throw ConfigError("probe_width_ps", "must be > 0");
  }

  validate(s.transition);
  validate(s.medium);
  validate(s.pump);
  return s;
}

KeyValues scenario_to_key_values(const Scenario& s) {
  KeyValues out;
  out["gamma_THz"] = format_double(s.transition.gamma);
  out["lambda_nm"] = format_double(s.transition.wavelength * 1e6);
  out["omega_rad_THz"] = format_double(s.transition.omega);
  out["d_Cm"] = format_double(s.transition.dipole);
  out["sigma_r_m2"] = format_double(s.transition.sigma_r * 1e-6);
  out["n_per_mm3"] = format_double(s.medium.density);
  out["L_mm"] = format_double(s.medium.length);
  out["sigma_m2"] = format_double(s.medium.sigma * 1e-6);
  out["r_um"] = format_double(s.medium.radius * 1e3);
  out["np_photons"] = format_double(s.pump.photons);
  out["tau_p_fs"] = format_double(s.pump.duration * 1e3);
  out["tau_i_ps"] = format_double(s.pump.arrival);
  switch (s.sim.initial) {
    case InitialState::ground: out["initial_state"] = "ground"; break;
    case InitialState::inverted: out["initial_state"] = "inverted"; break;
    case InitialState::absorber: out["initial_state"] = "absorber"; break;
  }
  out["pump"] = s.sim.pump_enabled ? "on" : "off";
  out["noise"] = s.sim.noise_enabled ? "on" : "off";
  if (s.sim.grid_nz) out["grid_nz"] = std::to_string(*s.sim.grid_nz);
  if (s.sim.t_end) out["t_end_ps"] = format_double(*s.sim.t_end);
  out["snapshot_stride"] = std::to_string(s.sim.snapshot_stride);
  if (s.sim.probe.amplitude != 0.0) {
    out["probe_amplitude_rad_per_ps"] = format_double(s.sim.probe.amplitude);
    out["probe_center_ps"] = format_double(s.sim.probe.center);
    out["probe_width_ps"] = format_double(s.sim.probe.width);
  }
  return out;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  KeyValues values = parse_key_values(buf.str());
  values.erase("name");
  return scenario_from_key_values(values);
}

std::string format_key_values(const KeyValues& values) {
  std::ostringstream os;
  for (const auto& [key, value] : values) os << key << " = " << value << '\n';
  return os.str();
}

}  // namespace sfmb
