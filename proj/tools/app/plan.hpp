#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "sfmb/scenario_io.hpp"

namespace sfmb::app {

enum class PlanKind { single, ensemble, sweep_Ln, sweep_rNp, sweep_L, sweep_Tp, oracle, fit };

std::string plan_kind_name(PlanKind kind);
PlanKind plan_kind_from_name(const std::string& name);  // throws ConfigError

struct Axis {
  std::string key;  // scenario key, or T_p_fs / Q for sweep_Tp
  std::vector<double> values;
};

/// One experiment. The scenario is held as raw key-values so that a manifest
/// written from the plan reproduces the run exactly.
struct ExperimentPlan {
  PlanKind kind = PlanKind::ensemble;
  std::string scenario_source;  // path the scenario was read from, informational
  KeyValues scenario;
  std::vector<Axis> axes;
  double alpha = 0.0;           // sweep_L: optical depth held fixed
  std::filesystem::path output;
  std::uint64_t master_seed = 1;
  std::size_t workers = 0;      // 0: hardware concurrency
  std::size_t realizations = 100;

  // fit
  std::string fit_family;
  std::filesystem::path fit_data;
  std::string fit_x = "x";
  std::string fit_y = "y";
  bool fit_log = false;
};

inline constexpr std::size_t kDeskRealizations = 100;
inline constexpr std::size_t kPaperRealizations = 1000;

/// "desk", "paper" or a positive integer.
std::size_t parse_realizations(const std::string& text);

/// `base` resolves relative scenario and data paths. A "scenario" entry may be
/// a path or an object of key-values; "overrides" are merged into it.
ExperimentPlan plan_from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
nlohmann::json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan load_plan(const std::filesystem::path& path);

/// Throws ConfigError for empty or non-monotone axes, missing axes, an
/// unparsable scenario or an output directory that cannot be created.
void check_plan(const ExperimentPlan& plan);

/// Sets the density key, replacing whichever unit the scenario used.
void set_density_per_mm3(KeyValues& kv, double density);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::vector<std::string> info;

  bool ok() const { return errors.empty(); }
};

ValidationReport validate_config(const std::filesystem::path& path);
ValidationReport validate_key_values(const KeyValues& kv);

/// Executes the plan, writes artifacts plus manifest.json under plan.output and
/// returns a process exit code (0 ok, 3 runtime failure). Config problems
/// throw ConfigError before anything runs.
int run_plan(const ExperimentPlan& plan, std::ostream& log);

}  // namespace sfmb::app
