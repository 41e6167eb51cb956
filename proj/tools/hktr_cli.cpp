// Command-line front end: runs experiments described by a JSON configuration.

#include "hktr/errors.hpp"
#include "hktr/harness.hpp"
#include "hktr/surrogate.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

std::filesystem::path output_dir(const hktr::ExperimentConfig& cfg) {
  if (const char* env = std::getenv("HKTR_OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

bool any_group_failed(const hktr::ExperimentResult& result) {
  if (result.rows.empty()) return true;
  for (const auto& row : result.rows) {
    if (row.n_failures == row.n_runs) return true;
  }
  return false;
}

int experiment(const std::string& path, hktr::ExperimentOptions options) {
  const auto cfg = hktr::load_config(path);
  const auto result = hktr::run_experiment(cfg, options);
  const auto dir = output_dir(cfg);
  hktr::emit_outputs(result, dir);
  std::cout << "reference J = " << std::setprecision(12) << result.reference_value << "\n\n";
  hktr::write_summary_table(result.rows, std::cout);
  std::cout << "\noutputs written to " << dir.string() << '\n';
  return any_group_failed(result) ? kNumericalFailure : 0;
}

int reference(const std::string& path) {
  const auto cfg = hktr::load_config(path);
  auto problem = hktr::make_problem(cfg);
  const auto ref = hktr::reference_solution(*problem, hktr::experiment_starts(cfg, *problem));
  const auto dir = output_dir(cfg);
  std::filesystem::create_directories(dir);
  nlohmann::json j = {
      {"point", std::vector<double>(ref.point.data(), ref.point.data() + ref.point.size())},
      {"value", ref.value},
      {"fom_evals", problem->evaluations()},
  };
  std::ofstream(dir / "reference.json") << j.dump(2) << '\n';
  std::cout << std::setprecision(12) << "reference J = " << ref.value << " at (";
  for (Eigen::Index m = 0; m < ref.point.size(); ++m) std::cout << (m ? ", " : "") << ref.point[m];
  std::cout << ")\n";
  return 0;
}

int power_field(const std::string& path, int grid) {
  const auto cfg = hktr::load_config(path);
  auto problem = hktr::make_problem(cfg);
  const auto starts = hktr::experiment_starts(cfg, *problem);
  const hktr::KernelSpec kernel(cfg.kernel, cfg.epsilons.front(), problem->dim());

  hktr::RunReport report;
  try {
    report = hktr::run_trust_region(*problem, kernel, starts.front(), cfg.tr);
  } catch (const hktr::RunFailure& f) {
    std::cerr << "warning: " << f.what() << "; exporting the partial run\n";
    report = f.report();
  }
  const auto dir = output_dir(cfg);
  std::filesystem::create_directories(dir);
  std::ofstream os(dir / "power_field.csv");
  if (!os) throw hktr::Error("cannot open " + (dir / "power_field.csv").string() + " for writing");
  hktr::write_power_field_csv(kernel, hktr::evaluated_points(report), hktr::sampling_box(*problem), grid, os);
  std::cout << "power field written to " << (dir / "power_field.csv").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermite kernel trust-region optimization"};
  app.require_subcommand(1);

  std::string config;
  int grid = 101;
  auto* run = app.add_subcommand("run", "run the trust-region method for every configured shape parameter");
  run->add_option("config", config, "experiment configuration (JSON)")->required();
  auto* ref = app.add_subcommand("reference", "compute the tight-tolerance reference solution");
  ref->add_option("config", config, "experiment configuration (JSON)")->required();
  auto* pf = app.add_subcommand("power-field", "export the power function after one run as CSV");
  pf->add_option("config", config, "experiment configuration (JSON)")->required();
  pf->add_option("--grid", grid, "grid points per axis")->check(CLI::Range(2, 100000));
  auto* cmp = app.add_subcommand("compare", "trust-region method versus the baseline on identical starts");
  cmp->add_option("config", config, "experiment configuration (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) return experiment(config, {.trust_region = true, .baseline = false});
    if (*cmp) return experiment(config, {.trust_region = true, .baseline = true});
    if (*ref) return reference(config);
    if (*pf) return power_field(config, grid);
  } catch (const hktr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const hktr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return 0;
}
