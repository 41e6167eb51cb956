#include "hktr/baseline.hpp"
#include "hktr/errors.hpp"
#include "hktr/harness.hpp"
#include "hktr/problems.hpp"
#include "hktr/surrogate.hpp"
#include "hktr/tr_driver.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hktr;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// Rows of a (n, p) array as points.
std::vector<Vector> rows(const Matrix& m) {
  std::vector<Vector> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).transpose());
  return out;
}

// Python callables returning (value, gradient).
std::unique_ptr<Problem> callable_problem(const std::string& name, const Vector& lower, const Vector& upper,
                                          py::function fn) {
  if (lower.size() != upper.size()) throw InvalidInput("lower and upper bounds differ in length");
  return std::make_unique<FunctionProblem>(name, Box{lower, upper}, [fn](const Vector& x) {
    py::gil_scoped_acquire gil;
    auto [value, gradient] = fn(x).cast<std::pair<double, Vector>>();
    return ObjectiveValue{value, std::move(gradient)};
  });
}

template <typename F>
py::object run_guarded(F&& f) {
  try {
    return to_python(to_json(f()));
  } catch (const RunFailure& e) {
    py::dict partial = to_python(to_json(e.report()));
    partial["error"] = e.what();
    return std::move(partial);
  }
}

}  // namespace

PYBIND11_MODULE(_hktr, m) {
  m.doc() = "Hermite kernel trust-region optimization";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidInput>(m, "InvalidInput", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<NumericalBreakdown>(m, "NumericalBreakdown", error.ptr());

  py::class_<KernelSpec>(m, "Kernel")
      .def(py::init([](const std::string& family, double shape, int dim) {
             return KernelSpec::from_name(family, shape, dim);
           }),
           py::arg("family"), py::arg("shape"), py::arg("dim"))
      .def_property_readonly("family", [](const KernelSpec& k) { return std::string(to_string(k.family())); })
      .def_property_readonly("shape", &KernelSpec::shape)
      .def_property_readonly("dim", &KernelSpec::dim)
      .def_property_readonly("diagonal", &KernelSpec::diagonal)
      .def("__call__", &KernelSpec::eval, py::arg("x"), py::arg("y"))
      .def("grad1", &KernelSpec::grad1, py::arg("x"), py::arg("y"))
      .def("cross_hessian", &KernelSpec::cross_hessian, py::arg("x"), py::arg("y"))
      .def("gram", [](const KernelSpec& k, const Matrix& points) { return assemble_gram(k, rows(points)); },
           py::arg("points"), "Hermite Gram matrix; unknowns ordered as all values, then all gradients.");

  py::class_<Surrogate>(m, "Surrogate")
      .def_static(
          "fit",
          [](const KernelSpec& k, const Matrix& points, const Vector& values, const Matrix& gradients,
             double norm_bound) {
            if (values.size() != points.rows() || gradients.rows() != points.rows()) {
              throw InvalidInput("points, values and gradients need the same number of rows");
            }
            TrainingSet t;
            for (Eigen::Index i = 0; i < points.rows(); ++i) {
              t.add(points.row(i).transpose(), values[i], gradients.row(i).transpose());
            }
            return Surrogate::fit(k, std::move(t), norm_bound);
          },
          py::arg("kernel"), py::arg("points"), py::arg("values"), py::arg("gradients"), py::arg("norm_bound") = 1.0)
      .def("__call__", &Surrogate::value, py::arg("x"))
      .def("gradient", [](const Surrogate& s, const Vector& x) { return s.evaluate(x).gradient; }, py::arg("x"))
      .def("power", py::overload_cast<const Vector&>(&Surrogate::power, py::const_), py::arg("x"))
      .def("error_bounds",
           [](const Surrogate& s, const Vector& x) {
             const ErrorBounds b = s.error_bounds(x);
             return std::make_pair(b.value_bound, b.gradient_bound);
           },
           py::arg("x"))
      .def_property_readonly("rkhs_norm", &Surrogate::rkhs_norm)
      .def_property_readonly("jitter", &Surrogate::jitter_used);

  py::class_<Problem>(m, "Problem")
      .def_property_readonly("name", &Problem::name)
      .def_property_readonly("dim", &Problem::dim)
      .def_property_readonly("bounds",
                             [](const Problem& p) {
                               const Box b = p.box();
                               return std::make_pair(b.lower, b.upper);
                             })
      .def_property_readonly("evaluations", &Problem::evaluations)
      .def("__call__",
           [](Problem& p, const Vector& x) {
             if (x.size() != p.dim()) throw InvalidInput("point has wrong dimension");
             ObjectiveValue v = p.evaluate(x);
             return std::make_pair(v.value, v.gradient);
           },
           py::arg("x"), "Returns (value, gradient); counts one evaluation.");

  m.def("oned", &problem_1d);
  m.def("rosenbrock", &problem_rosenbrock);
  m.def("pde2d", &problem_pde2d, py::arg("grid_n") = 96);
  m.def("function_problem", &callable_problem, py::arg("name"), py::arg("lower"), py::arg("upper"), py::arg("fn"),
        "Wraps fn(x) -> (value, gradient) on the box [lower, upper]; use +-inf for missing bounds.");

  m.def("analytic_norm_1d", &analytic_norm_1d_gaussian, py::arg("eps"));
  m.def("estimate_norm", &estimate_norm, py::arg("kernel"), py::arg("problem"), py::arg("n_samples"),
        py::arg("seed") = 0, py::arg("safety") = 1.0);

  m.def(
      "run_trust_region",
      [](Problem& p, const KernelSpec& k, const Vector& x0, double norm_bound, double delta0, double tau_foc,
         double tau_j, int i_max, bool audit) {
        TRConfig cfg;
        cfg.delta0 = delta0;
        cfg.tau_foc = tau_foc;
        cfg.tau_j = tau_j;
        cfg.i_max = i_max;
        cfg.audit = audit;
        return run_guarded([&] { return run_trust_region(p, k, x0, cfg, norm_bound); });
      },
      py::arg("problem"), py::arg("kernel"), py::arg("x0"), py::arg("norm_bound"), py::arg("delta0") = 0.5,
      py::arg("tau_foc") = 1e-7, py::arg("tau_j") = 1e-14, py::arg("i_max") = 100, py::arg("audit") = false,
      "Runs the trust-region method; returns the run report as a dict (with an 'error' entry on failure).");

  m.def(
      "minimize_baseline",
      [](Problem& p, const Vector& x0, double tau_foc, double tau_j, int i_max) {
        BaselineConfig cfg;
        cfg.tau_foc = tau_foc;
        cfg.tau_j = tau_j;
        cfg.i_max = i_max;
        return run_guarded([&] { return minimize(p, x0, cfg); });
      },
      py::arg("problem"), py::arg("x0"), py::arg("tau_foc") = 1e-7, py::arg("tau_j") = 1e-14, py::arg("i_max") = 500);

  m.def(
      "run_experiment",
      [](const std::string& config_json, bool baseline) {
        const ExperimentConfig cfg = parse_config(config_json);
        const ExperimentResult r = run_experiment(cfg, {.trust_region = true, .baseline = baseline});
        py::list summary;
        for (const auto& row : r.rows) {
          py::dict d;
          d["label"] = row.label;
          d["avg_fom_evals"] = row.avg_fom_evals;
          d["avg_foc"] = row.avg_foc;
          d["avg_rel_err_J"] = row.avg_rel_err_j;
          d["n_failures"] = row.n_failures;
          d["n_runs"] = row.n_runs;
          summary.append(d);
        }
        py::list runs;
        for (const auto& rec : r.records) {
          py::dict d = to_python(to_json(rec.report));
          d["label"] = rec.label;
          d["start_index"] = rec.start_index;
          runs.append(d);
        }
        py::dict out;
        out["summary"] = summary;
        out["runs"] = runs;
        out["reference_value"] = r.reference_value;
        out["reference_point"] = r.reference_point;
        out["norm_bounds"] = r.norm_bounds;
        return out;
      },
      py::arg("config_json"), py::arg("baseline") = false,
      "Runs an experiment described by a JSON configuration string (same schema as the CLI).");
}
