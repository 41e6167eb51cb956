#pragma once

#include "hktr/baseline.hpp"
#include "hktr/kernels.hpp"
#include "hktr/problem.hpp"
#include "hktr/report.hpp"
#include "hktr/tr_driver.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hktr {

enum class ProblemKind { OneD, Rosenbrock, Pde2d };

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::OneD;
  int grid_n = 96;
  KernelFamily kernel = KernelFamily::Gaussian;
  std::vector<double> epsilons;
  TRConfig tr;
  BaselineConfig baseline;
  int n_starts = 5;
  std::uint64_t seed = 0;
  /// Explicit start points; when set they replace the sampled starts.
  std::optional<std::vector<Vector>> starts;
  std::filesystem::path output_dir = "results";
};

/// Parses and validates a JSON experiment description, filling defaults. Unknown keys are rejected.
/// Throws ConfigError naming the offending key (or the parse position).
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

std::unique_ptr<Problem> make_problem(const ExperimentConfig& cfg);

/// Box used for sampling starts: the problem box, or [-2, 2]^p where it is unbounded.
Box sampling_box(const Problem& problem);

/// The configured start points, or n_starts uniform samples of the sampling box drawn from `seed`.
std::vector<Vector> experiment_starts(const ExperimentConfig& cfg, const Problem& problem);

std::string epsilon_label(double eps);

struct SummaryRow {
  std::string label;
  double avg_fom_evals;
  double avg_foc;
  double avg_rel_err_j;
  int n_failures;
  int n_runs;
};

struct RunRecord {
  std::string label;
  int start_index;
  RunReport report;
};

struct ExperimentResult {
  std::vector<SummaryRow> rows;
  std::vector<RunRecord> records;
  Vector reference_point;
  double reference_value = 0.0;
  /// Norm bound used for each epsilon, in configuration order.
  std::vector<double> norm_bounds;
  std::size_t norm_estimation_evals = 0;
};

struct ExperimentOptions {
  bool trust_region = true;
  bool baseline = true;
};

/// |J - J_ref| / max(|J_ref|, 1).
double relative_error(double value, double reference);

SummaryRow summarize(const std::string& label, const std::vector<RunRecord>& records, double reference);

/// Runs the trust-region method for every epsilon and (optionally) the baseline from identical starts,
/// and measures everything against the tight-tolerance reference. Individual run failures are recorded,
/// not thrown.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentOptions& options = {});

/// Writes summary.csv, summary.txt, reference.json and runs/<label>_<k>.json under `dir`.
void emit_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& os);
void write_summary_table(const std::vector<SummaryRow>& rows, std::ostream& os);

/// Points where the run evaluated the objective (the centers of its final surrogate).
std::vector<Vector> evaluated_points(const RunReport& report);

/// Power function of the Hermite interpolant on `centers` over a grid x grid lattice of `box`, followed by
/// one row per center. Header "x,P" in 1D and "x,y,P" in 2D.
void write_power_field_csv(const KernelSpec& kernel, const std::vector<Vector>& centers, const Box& box, int grid,
                           std::ostream& os);

}  // namespace hktr
