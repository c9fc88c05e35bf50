#include "nskf/recovery.hpp"

namespace nskf {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::NotConverged: return "not_converged";
    case Termination::Exact: return "exact";
    case Termination::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

nlohmann::json to_json(const RecoveryResult& r) {
  nlohmann::json x = nlohmann::json::array();
  for (Index i = 0; i < r.x_hat.size(); ++i) {
    x.push_back({r.x_hat(i).real(), r.x_hat(i).imag()});
  }
  nlohmann::json j = {
      {"solver", r.solver},
      {"n", r.n},
      {"m", r.m},
      {"iterations", r.iterations},
      {"termination", to_string(r.termination)},
      {"wall_time_ms", r.wall_time_ms},
      {"l1_trace", r.l1_trace},
      {"x_hat", std::move(x)},
  };
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

double l1_norm(const ComplexVector& x) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += std::abs(x(i));
  return s;
}

}  // namespace nskf
