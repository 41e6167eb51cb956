#include "hktr/errors.hpp"
#include "hktr/harness.hpp"
#include "hktr/surrogate.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hktr;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hktr_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const auto cfg = parse_config(R"({"problem": "oned", "kernel": {"family": "gaussian", "epsilon": 0.725}})");
  CHECK(cfg.problem == ProblemKind::OneD);
  CHECK(cfg.epsilons == std::vector<double>{0.725});
  CHECK(cfg.n_starts == 5);
  CHECK(cfg.tr.sub.kappa_bt == 0.5);
  CHECK(cfg.tr.sub.kappa_arm == 1e-4);
  CHECK(cfg.tr.xi1 == 0.1);
  CHECK(cfg.tr.xi2 == 0.9);
  CHECK(cfg.tr.beta_radius == 0.5);
  CHECK(cfg.baseline.kappa_bt == 0.5);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config(R"({"problem": "oned", "kernel": {"family": "gaussian", "epsilon": -1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "oned"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "twelve", "kernel": {"family": "gaussian", "epsilon": 1}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  try {
    parse_config(R"({"problem": "oned", "kernel": {"family": "gaussian", "epsilon": 1}, "tr": {"sub": {"kapa": 1}}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("tr.sub.kapa") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(R"({"problem": "oned", "kernel": {"family": "gaussian", "epsilon": 1}, "n_starts": 0})"),
                  ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("epsilon sweep yields one group per value") {
  auto cfg = parse_config(R"({"problem": "oned", "kernel": {"family": "gaussian", "epsilon": [0.725, 1.0, 2.0]},
                              "tr": {"norm": {"source": "analytic"}}})");
  const auto result = run_experiment(cfg, {.trust_region = true, .baseline = false});
  REQUIRE(result.rows.size() == 3);
  for (const auto& row : result.rows) {
    CHECK(row.avg_fom_evals > 0);
    CHECK(row.n_failures == 0);
  }
  CHECK(result.rows[0].avg_fom_evals < result.rows[1].avg_fom_evals);
  CHECK(result.rows[0].avg_fom_evals < result.rows[2].avg_fom_evals);
}

TEST_CASE("stationary start") {
  auto cfg = parse_config(R"({"problem": "oned", "kernel": {"family": "gaussian", "epsilon": 0.725},
                              "starts": [[0.0]]})");
  const auto result = run_experiment(cfg, {.trust_region = true, .baseline = false});
  REQUIRE(result.rows.size() == 1);
  CHECK(result.rows[0].avg_fom_evals == 1.0);
  REQUIRE(result.records.size() == 1);
  CHECK(result.records[0].report.termination == Termination::FirstOrder);
}

TEST_CASE("outputs are deterministic") {
  const auto cfg = parse_config(R"({"problem": "oned", "kernel": {"family": "gaussian", "epsilon": [1.0, 2.0]},
                                    "n_starts": 3, "seed": 12})");
  const auto a = scratch("det_a"), b = scratch("det_b");
  emit_outputs(run_experiment(cfg), a);
  emit_outputs(run_experiment(cfg), b);
  const std::string csv = slurp(a / "summary.csv");
  CHECK(csv == slurp(b / "summary.csv"));
  CHECK(csv.rfind("label,avg_fom_evals,avg_foc,avg_rel_err_J,n_failures\n", 0) == 0);
  CHECK(std::filesystem::exists(a / "summary.txt"));
  CHECK(std::filesystem::exists(a / "reference.json"));
  CHECK(std::filesystem::exists(a / "runs" / "eps=1_0.json"));
  CHECK(std::filesystem::exists(a / "runs" / "baseline_2.json"));
}

TEST_CASE("trust region and baseline share starts") {
  const auto cfg = parse_config(R"({"problem": "oned", "kernel": {"family": "gaussian", "epsilon": 1.0},
                                    "n_starts": 4, "seed": 3})");
  const auto result = run_experiment(cfg);
  std::vector<Vector> tr, base;
  for (const auto& r : result.records) (r.label == "baseline" ? base : tr).push_back(r.report.x0);
  REQUIRE(tr.size() == 4);
  REQUIRE(base.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(tr[i] == base[i]);
}

TEST_CASE("summary statistics") {
  CHECK(relative_error(2.5, 2.0) == doctest::Approx(0.25));
  CHECK(relative_error(0.5, 0.1) == doctest::Approx(0.4));

  std::vector<RunRecord> records(2);
  records[0].label = records[1].label = "x";
  records[0].report.success = true;
  records[0].report.fom_evals = 4;
  records[0].report.final_foc = 1e-8;
  records[0].report.final_value = 2.0;
  records[1].report.success = false;
  const SummaryRow row = summarize("x", records, 2.0);
  CHECK(row.avg_fom_evals == 4.0);
  CHECK(row.n_failures == 1);
  CHECK(row.n_runs == 2);

  std::ostringstream os;
  write_summary_csv({row}, os);
  CHECK(os.str().find("x,4") != std::string::npos);

  const SummaryRow empty = summarize("none", {}, 2.0);
  CHECK(empty.n_runs == 0);
}

TEST_CASE("power field vanishes at the centers") {
  const KernelSpec k(KernelFamily::Gaussian, 1.0, 1);
  const std::vector<Vector> centers{Vector::Constant(1, -1.0), Vector::Constant(1, 0.2), Vector::Constant(1, 1.5)};
  std::ostringstream os;
  write_power_field_csv(k, centers, Box::uniform(1, -2, 2), 41, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "x,P");
  std::vector<std::pair<double, double>> rows;
  while (std::getline(is, line)) {
    const auto comma = line.find(',');
    rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  CHECK(rows.size() == 41 + 3);
  for (const auto& c : centers) {
    bool found = false;
    for (const auto& [x, p] : rows) {
      if (x == c[0]) {
        found = true;
        CHECK(p <= 1e-6);
      }
    }
    CHECK(found);
  }
}

TEST_CASE("sampling box and labels") {
  auto rosen = make_problem(parse_config(R"({"problem": "rosenbrock", "kernel": {"family": "gaussian", "epsilon": 1}})"));
  const Box b = sampling_box(*rosen);
  CHECK(b.lower[0] == -2.0);
  CHECK(b.upper[1] == 2.0);
  CHECK(epsilon_label(0.725) == "eps=0.725");
  CHECK(epsilon_label(10.0) == "eps=10");
}
