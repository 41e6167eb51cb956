#include "hktr/report.hpp"

namespace hktr {
namespace {

nlohmann::json vec(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

template <typename T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::AcceptedBySufficient: return "AcceptedBySufficient";
    case Branch::RejectedByNecessary: return "RejectedByNecessary";
    case Branch::AcceptedByDirect: return "AcceptedByDirect";
    case Branch::RejectedByDirect: return "RejectedByDirect";
    case Branch::SubproblemFailed: return "SubproblemFailed";
  }
  return "?";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::FirstOrder: return "FirstOrder";
    case Termination::Stagnation: return "Stagnation";
    case Termination::MaxIterations: return "MaxIterations";
    case Termination::Stalled: return "Stalled";
    case Termination::Failed: return "Failed";
  }
  return "?";
}

nlohmann::json to_json(const IterationRecord& r) {
  return {
      {"outer_iter", r.outer_iter},
      {"candidate", vec(r.candidate)},
      {"branch", std::string(to_string(r.branch))},
      {"rho", opt(r.rho)},
      {"delta_before", r.delta_before},
      {"delta_after", r.delta_after},
      {"foc_measure", opt(r.foc_measure)},
      {"j_value", opt(r.j_value)},
      {"surrogate_value", r.surrogate_value},
      {"error_bound", r.error_bound},
      {"agc_value", r.agc_value},
      {"subproblem", r.subproblem},
      {"inner_steps", r.inner_steps},
      {"audit_value", opt(r.audit_value)},
  };
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json log = nlohmann::json::array();
  for (const auto& rec : r.log) log.push_back(to_json(rec));
  return {
      {"method", r.method},
      {"x0", vec(r.x0)},
      {"final_iterate", vec(r.final_iterate)},
      {"final_value", r.final_value},
      {"final_foc", r.final_foc},
      {"fom_evals", r.fom_evals},
      {"norm_estimation_evals", r.norm_estimation_evals},
      {"outer_iters", r.outer_iters},
      {"norm_bound", r.norm_bound},
      {"termination", std::string(to_string(r.termination))},
      {"success", r.success},
      {"error", r.error},
      {"accepted_values", r.accepted_values},
      {"audit_checks", r.audit_checks},
      {"audit_violations", r.audit_violations},
      {"log", std::move(log)},
  };
}

}  // namespace hktr
