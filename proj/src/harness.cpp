#include "hktr/harness.hpp"

#include "hktr/errors.hpp"
#include "hktr/problems.hpp"
#include "hktr/sampling.hpp"
#include "hktr/surrogate.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace hktr {
namespace {

using nlohmann::json;

/// Reads fields of one JSON object, remembering which keys were consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return as<T>(raw(key), key_path(key));
  }

  Section section(const std::string& key) {
    static const json empty = json::object();
    if (!has(key)) return Section(empty, key_path(key));
    return Section(raw(key), key_path(key));
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key '" + key_path(key) + "'");
    }
  }

  template <typename T>
  static T as(const json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("'" + path + "' must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError("'" + path + "' must be an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned() == false && v.get<long long>() < 0) {
          throw ConfigError("'" + path + "' must be non-negative");
        }
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError("'" + path + "' must be a number");
    } else {
      if (!v.is_string()) throw ConfigError("'" + path + "' must be a string");
    }
    return v.get<T>();
  }

 private:
  std::string where() const { return path_.empty() ? "configuration" : "'" + path_ + "'"; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ProblemKind problem_from_string(const std::string& s) {
  if (s == "oned") return ProblemKind::OneD;
  if (s == "rosenbrock") return ProblemKind::Rosenbrock;
  if (s == "pde2d") return ProblemKind::Pde2d;
  throw ConfigError("'problem' must be one of oned, rosenbrock, pde2d (got '" + s + "')");
}

int problem_dim(ProblemKind kind) { return kind == ProblemKind::OneD ? 1 : 2; }

struct Tolerances {
  double tau_foc;
  double tau_j;
};

Tolerances default_tolerances(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::OneD: return {1e-7, 1e-14};
    case ProblemKind::Pde2d: return {1e-4, 1e-12};
    case ProblemKind::Rosenbrock: return {1e-6, 1e-14};
  }
  return {1e-7, 1e-14};
}

void parse_sub(Section s, SubproblemConfig& sub) {
  sub.kappa_bt = s.get("kappa_bt", sub.kappa_bt);
  sub.kappa_arm = s.get("kappa_arm", sub.kappa_arm);
  sub.tau_sub = s.get("tau_sub", sub.tau_sub);
  sub.beta2 = s.get("beta2", sub.beta2);
  sub.l_max = s.get("l_max", sub.l_max);
  sub.j_max = s.get("j_max", sub.j_max);
  s.finish();
}

void parse_norm(Section s, const ExperimentConfig& cfg, NormSource& norm) {
  const bool analytic_ok = cfg.problem == ProblemKind::OneD && cfg.kernel == KernelFamily::Gaussian;
  const std::string source = s.get<std::string>("source", analytic_ok ? "analytic" : "estimated");
  if (source == "analytic") {
    if (!analytic_ok) throw ConfigError("'tr.norm.source' analytic needs problem oned with the gaussian kernel");
    norm.kind = NormSource::Kind::Analytic1D;
  } else if (source == "estimated") {
    norm.kind = NormSource::Kind::Estimated;
  } else if (source == "fixed") {
    norm.kind = NormSource::Kind::Fixed;
    if (!s.has("value")) throw ConfigError("'tr.norm.value' is required for a fixed norm");
  } else {
    throw ConfigError("'tr.norm.source' must be analytic, estimated or fixed (got '" + source + "')");
  }
  norm.n_samples = s.get("n_samples", 50);
  norm.seed = s.get<std::uint64_t>("seed", cfg.seed);
  norm.safety = s.get("safety", 1.0);
  norm.value = s.get("value", 1.0);
  s.finish();
}

void parse_tr(Section s, ExperimentConfig& cfg) {
  TRConfig& tr = cfg.tr;
  const Tolerances tol = default_tolerances(cfg.problem);
  tr.delta0 = s.get("delta0", tr.delta0);
  tr.i_max = s.get("i_max", tr.i_max);
  tr.tau_foc = s.get("tau_foc", tol.tau_foc);
  tr.tau_j = s.get("tau_j", tol.tau_j);
  tr.xi1 = s.get("xi1", tr.xi1);
  tr.xi2 = s.get("xi2", tr.xi2);
  tr.beta_radius = s.get("beta_radius", tr.beta_radius);
  tr.beta1_shrink = s.get("beta1_shrink", tr.beta1_shrink);
  tr.max_rejects = s.get("max_rejects", tr.max_rejects);
  tr.audit = s.get("audit", tr.audit);
  parse_sub(s.section("sub"), tr.sub);
  parse_norm(s.section("norm"), cfg, tr.norm);
  s.finish();
}

void parse_baseline(Section s, ExperimentConfig& cfg) {
  BaselineConfig& b = cfg.baseline;
  const Tolerances tol = default_tolerances(cfg.problem);
  b.tau_foc = s.get("tau_foc", tol.tau_foc);
  b.tau_j = s.get("tau_j", tol.tau_j);
  b.i_max = s.get("i_max", b.i_max);
  b.kappa_bt = s.get("kappa_bt", cfg.tr.sub.kappa_bt);
  b.kappa_arm = s.get("kappa_arm", cfg.tr.sub.kappa_arm);
  b.j_max = s.get("j_max", cfg.tr.sub.j_max);
  s.finish();
}

std::vector<double> parse_epsilons(const json& v, const std::string& path) {
  std::vector<double> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(Section::as<double>(v[i], path + "[" + std::to_string(i) + "]"));
    }
  } else {
    out.push_back(Section::as<double>(v, path));
  }
  if (out.empty()) throw ConfigError("'" + path + "' must not be empty");
  for (double e : out) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("'" + path + "' values must be positive");
  }
  return out;
}

std::vector<Vector> parse_starts(const json& v, int dim) {
  if (!v.is_array() || v.empty()) throw ConfigError("'starts' must be a non-empty list of points");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string path = "starts[" + std::to_string(i) + "]";
    const json& p = v[i];
    if (!p.is_array() || static_cast<int>(p.size()) != dim) {
      throw ConfigError("'" + path + "' must be a list of " + std::to_string(dim) + " numbers");
    }
    Vector x(dim);
    for (int m = 0; m < dim; ++m) x[m] = Section::as<double>(p[m], path + "[" + std::to_string(m) + "]");
    out.push_back(std::move(x));
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific << v;
  return os.str();
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw Error("failed writing " + path.string());
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }

  ExperimentConfig cfg;
  Section root(j, "");
  if (!root.has("problem")) throw ConfigError("missing required key 'problem'");
  cfg.problem = problem_from_string(root.get<std::string>("problem", ""));
  cfg.grid_n = root.get("grid_n", cfg.grid_n);
  if (cfg.problem == ProblemKind::Pde2d && cfg.grid_n < 2) throw ConfigError("'grid_n' must be at least 2");

  if (!root.has("kernel")) throw ConfigError("missing required key 'kernel'");
  {
    Section k = root.section("kernel");
    try {
      cfg.kernel = kernel_family_from_string(k.get<std::string>("family", "gaussian"));
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("'kernel.family': ") + e.what());
    }
    if (!k.has("epsilon")) throw ConfigError("missing required key 'kernel.epsilon'");
    cfg.epsilons = parse_epsilons(k.raw("epsilon"), "kernel.epsilon");
    k.finish();
  }

  cfg.n_starts = root.get("n_starts", cfg.n_starts);
  if (cfg.n_starts < 1) throw ConfigError("'n_starts' must be at least 1");
  cfg.seed = root.get<std::uint64_t>("seed", cfg.seed);
  if (root.has("starts")) {
    cfg.starts = parse_starts(root.raw("starts"), problem_dim(cfg.problem));
    cfg.n_starts = static_cast<int>(cfg.starts->size());
  }
  cfg.output_dir = root.get<std::string>("output_dir", cfg.output_dir.string());

  parse_tr(root.section("tr"), cfg);
  parse_baseline(root.section("baseline"), cfg);
  root.finish();

  try {
    cfg.tr.validate();
    cfg.baseline.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read configuration file " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::unique_ptr<Problem> make_problem(const ExperimentConfig& cfg) {
  switch (cfg.problem) {
    case ProblemKind::OneD: return problem_1d();
    case ProblemKind::Rosenbrock: return problem_rosenbrock();
    case ProblemKind::Pde2d: return problem_pde2d(cfg.grid_n);
  }
  throw ConfigError("unknown problem");
}

Box sampling_box(const Problem& problem) { return problem.box().with_default_bounds(-2.0, 2.0); }

std::vector<Vector> experiment_starts(const ExperimentConfig& cfg, const Problem& problem) {
  if (cfg.starts) return *cfg.starts;
  UniformSampler sampler(cfg.seed);
  const Box box = sampling_box(problem);
  std::vector<Vector> out;
  for (int k = 0; k < cfg.n_starts; ++k) out.push_back(sampler.point(box));
  return out;
}

std::string epsilon_label(double eps) {
  std::ostringstream os;
  os << "eps=" << std::setprecision(6) << eps;
  return os.str();
}

double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1.0);
}

SummaryRow summarize(const std::string& label, const std::vector<RunRecord>& records, double reference) {
  SummaryRow row{label, 0.0, 0.0, 0.0, 0, 0};
  int ok = 0;
  for (const auto& r : records) {
    if (r.label != label) continue;
    ++row.n_runs;
    if (!r.report.success) {
      ++row.n_failures;
      continue;
    }
    ++ok;
    row.avg_fom_evals += static_cast<double>(r.report.fom_evals);
    row.avg_foc += r.report.final_foc;
    row.avg_rel_err_j += relative_error(r.report.final_value, reference);
  }
  if (ok == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.avg_fom_evals = row.avg_foc = row.avg_rel_err_j = nan;
  } else {
    row.avg_fom_evals /= ok;
    row.avg_foc /= ok;
    row.avg_rel_err_j /= ok;
  }
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentOptions& options) {
  ExperimentResult result;
  auto problem = make_problem(cfg);
  const std::vector<Vector> starts = experiment_starts(cfg, *problem);

  const ReferenceSolution ref = reference_solution(*problem, starts);
  result.reference_point = ref.point;
  result.reference_value = ref.value;

  auto record = [&](const std::string& label, int k, auto&& run) {
    try {
      result.records.push_back({label, k, run()});
    } catch (const RunFailure& f) {
      result.records.push_back({label, k, f.report()});
    }
  };

  std::vector<std::string> labels;
  if (options.trust_region) {
    for (double eps : cfg.epsilons) {
      const KernelSpec kernel(cfg.kernel, eps, problem->dim());
      const std::string label = epsilon_label(eps);
      labels.push_back(label);

      auto norm_problem = make_problem(cfg);
      double bound = std::numeric_limits<double>::quiet_NaN();
      try {
        bound = resolve_norm_bound(kernel, *norm_problem, cfg.tr.norm);
      } catch (const Error& e) {
        for (int k = 0; k < static_cast<int>(starts.size()); ++k) {
          RunReport failed;
          failed.method = "hktr";
          failed.x0 = starts[k];
          failed.error = e.what();
          result.records.push_back({label, k, std::move(failed)});
        }
        result.norm_bounds.push_back(bound);
        continue;
      }
      result.norm_bounds.push_back(bound);
      result.norm_estimation_evals += norm_problem->evaluations();

      for (int k = 0; k < static_cast<int>(starts.size()); ++k) {
        auto run_problem = make_problem(cfg);
        record(label, k, [&] {
          RunReport r = run_trust_region(*run_problem, kernel, starts[k], cfg.tr, bound);
          r.norm_estimation_evals = norm_problem->evaluations();
          return r;
        });
      }
    }
  }
  if (options.baseline) {
    labels.push_back("baseline");
    for (int k = 0; k < static_cast<int>(starts.size()); ++k) {
      auto run_problem = make_problem(cfg);
      record("baseline", k, [&] { return minimize(*run_problem, starts[k], cfg.baseline); });
    }
  }
  for (const auto& label : labels) result.rows.push_back(summarize(label, result.records, result.reference_value));
  return result;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& os) {
  os << "label,avg_fom_evals,avg_foc,avg_rel_err_J,n_failures\n";
  for (const auto& r : rows) {
    os << r.label << ',' << format_double(r.avg_fom_evals) << ',' << format_double(r.avg_foc) << ','
       << format_double(r.avg_rel_err_j) << ',' << r.n_failures << '\n';
  }
}

void write_summary_table(const std::vector<SummaryRow>& rows, std::ostream& os) {
  os << std::left << std::setw(14) << "label" << std::right << std::setw(16) << "avg FOM evals" << std::setw(16)
     << "avg FOC" << std::setw(18) << "avg rel. err J" << std::setw(10) << "failures" << '\n';
  os << std::string(74, '-') << '\n';
  for (const auto& r : rows) {
    std::ostringstream evals;
    if (std::isnan(r.avg_fom_evals)) {
      evals << "nan";
    } else {
      evals << std::fixed << std::setprecision(1) << r.avg_fom_evals;
    }
    os << std::left << std::setw(14) << r.label << std::right << std::setw(16) << evals.str() << std::setw(16)
       << format_double(r.avg_foc) << std::setw(18) << format_double(r.avg_rel_err_j) << std::setw(6)
       << r.n_failures << '/' << r.n_runs << '\n';
  }
}

void emit_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "runs");
  {
    std::ofstream os(dir / "summary.csv");
    if (!os) throw Error("cannot open " + (dir / "summary.csv").string() + " for writing");
    write_summary_csv(result.rows, os);
  }
  {
    std::ofstream os(dir / "summary.txt");
    if (!os) throw Error("cannot open " + (dir / "summary.txt").string() + " for writing");
    write_summary_table(result.rows, os);
  }
  json ref = {
      {"point", std::vector<double>(result.reference_point.data(),
                                    result.reference_point.data() + result.reference_point.size())},
      {"value", result.reference_value},
      {"norm_bounds", result.norm_bounds},
      {"norm_estimation_evals", result.norm_estimation_evals},
  };
  write_json(ref, dir / "reference.json");
  for (const auto& rec : result.records) {
    json j = to_json(rec.report);
    j["label"] = rec.label;
    j["start_index"] = rec.start_index;
    write_json(j, dir / "runs" / (rec.label + "_" + std::to_string(rec.start_index) + ".json"));
  }
}

std::vector<Vector> evaluated_points(const RunReport& report) {
  TrainingSet set;
  auto add = [&](const Vector& x) {
    if (x.size() > 0 && !set.find_near(x)) set.add(x, 0.0, Vector::Zero(x.size()));
  };
  add(report.x0);
  for (const auto& rec : report.log) {
    if (rec.j_value) add(rec.candidate);
  }
  return set.points;
}

void write_power_field_csv(const KernelSpec& kernel, const std::vector<Vector>& centers, const Box& box, int grid,
                           std::ostream& os) {
  if (grid < 2) throw InvalidInput("power-field grid needs at least 2 points per axis");
  if (box.dim() != 1 && box.dim() != 2) throw InvalidInput("power-field export supports 1D and 2D problems only");
  if (!box.is_bounded()) throw InvalidInput("power-field export needs a bounded box");
  TrainingSet set;
  for (const auto& c : centers) set.add(c, 0.0, Vector::Zero(c.size()));
  const Surrogate s = Surrogate::fit(kernel, std::move(set), 1.0);

  os << std::setprecision(17);
  auto coord = [&](int m, int k) { return box.lower[m] + (box.upper[m] - box.lower[m]) * k / (grid - 1); };
  if (box.dim() == 1) {
    os << "x,P\n";
    Vector x(1);
    for (int k = 0; k < grid; ++k) {
      x[0] = coord(0, k);
      os << x[0] << ',' << s.power(x) << '\n';
    }
    for (const auto& c : centers) os << c[0] << ',' << s.power(c) << '\n';
  } else {
    os << "x,y,P\n";
    Vector x(2);
    for (int b = 0; b < grid; ++b) {
      for (int a = 0; a < grid; ++a) {
        x << coord(0, a), coord(1, b);
        os << x[0] << ',' << x[1] << ',' << s.power(x) << '\n';
      }
    }
    for (const auto& c : centers) os << c[0] << ',' << c[1] << ',' << s.power(c) << '\n';
  }
}

}  // namespace hktr
