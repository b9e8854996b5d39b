#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "app/plan.hpp"
#include "sfmb/error.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct Flags {
  std::string scenario;
  std::string plan;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string ne;
  std::optional<std::size_t> grid_nz;
  std::optional<std::size_t> snapshots;
  std::string family;
  std::string data;
  std::string x = "x";
  std::string y = "y";
  bool log = false;
};

sfmb::app::ExperimentPlan plan_from_flags(sfmb::app::PlanKind kind, const Flags& f) {
  using namespace sfmb::app;
  ExperimentPlan plan;
  if (!f.plan.empty()) {
    plan = load_plan(f.plan);
  } else {
    plan.kind = kind;
    if (!f.scenario.empty()) {
      plan = plan_from_json({{"kind", plan_kind_name(kind)}, {"scenario", f.scenario}});
    }
  }
  if (!f.out.empty()) plan.output = f.out;
  if (f.seed) plan.master_seed = *f.seed;
  if (f.workers) plan.workers = *f.workers;
  if (!f.ne.empty()) plan.realizations = parse_realizations(f.ne);
  if (f.grid_nz) plan.scenario["grid_nz"] = std::to_string(*f.grid_nz);
  if (f.snapshots) plan.scenario["snapshot_stride"] = std::to_string(*f.snapshots);
  if (kind == PlanKind::fit) {
    if (!f.family.empty()) plan.fit_family = f.family;
    if (!f.data.empty()) plan.fit_data = f.data;
    plan.fit_x = f.x;
    plan.fit_y = f.y;
    plan.fit_log = plan.fit_log || f.log;
  }
  if (plan.output.empty()) plan.output = "sfmb_out";
  return plan;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sfmb::app;
  CLI::App app{"Stochastic Maxwell-Bloch simulator for swept-pumped three-level media"};
  app.require_subcommand(1);
  Flags f;

  const auto common = [&](CLI::App* sub, bool ensemble_flags) {
    sub->add_option("--scenario", f.scenario, "Scenario key-value file");
    sub->add_option("--out", f.out, "Output directory");
    sub->add_option("--seed", f.seed, "Master seed");
    sub->add_option("--grid-nz", f.grid_nz, "Number of spatial cells");
    if (ensemble_flags) {
      sub->add_option("--workers", f.workers, "Worker threads (0: all cores)");
      sub->add_option("--ne", f.ne, "Realizations: desk, paper or a count");
    }
  };

  auto* validate = app.add_subcommand("validate", "Check a scenario file and report warnings");
  validate->add_option("--scenario", f.scenario, "Scenario key-value file")->required();

  auto* run = app.add_subcommand("run", "Integrate one realization");
  common(run, false);
  run->add_option("--snapshots", f.snapshots, "Record I(t, z) every N steps");

  auto* ensemble = app.add_subcommand("ensemble", "Run a seeded ensemble");
  common(ensemble, true);

  auto* sweep = app.add_subcommand("sweep", "Execute a JSON plan or manifest");
  common(sweep, true);
  sweep->add_option("--plan", f.plan, "Plan file")->required();

  auto* oracle = app.add_subcommand("oracle", "Derived quantities and analytic estimates");
  oracle->add_option("--scenario", f.scenario, "Scenario key-value file")->required();
  oracle->add_option("--out", f.out, "Output directory");

  auto* fitcmd = app.add_subcommand("fit", "Fit a model family to CSV columns");
  fitcmd->add_option("--family", f.family, "exp_gain, power2, power_law, delay_law, pump_decay or exp_linear")
      ->required();
  fitcmd->add_option("--data", f.data, "CSV file with a header row")->required();
  fitcmd->add_option("--x", f.x, "Column for x");
  fitcmd->add_option("--y", f.y, "Column for y");
  fitcmd->add_flag("--log", f.log, "Fit ln(y)");
  fitcmd->add_option("--out", f.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (validate->parsed()) {
      const ValidationReport r = validate_config(f.scenario);
      for (const auto& e : r.errors) std::cout << "error: " << e << '\n';
      for (const auto& w : r.warnings) std::cout << "warning: " << w << '\n';
      for (const auto& i : r.info) std::cout << i << '\n';
      std::cout << (r.ok() ? "valid" : "invalid") << '\n';
      return r.ok() ? kOk : kConfigError;
    }
    PlanKind kind = PlanKind::single;
    if (ensemble->parsed()) kind = PlanKind::ensemble;
    if (oracle->parsed()) kind = PlanKind::oracle;
    if (fitcmd->parsed()) kind = PlanKind::fit;
    if (sweep->parsed()) kind = load_plan(f.plan).kind;
    if ((run->parsed() || ensemble->parsed()) && f.scenario.empty()) {
      throw sfmb::ConfigError("scenario", "--scenario is required");
    }
    return run_plan(plan_from_flags(kind, f), std::cout);
  } catch (const sfmb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
