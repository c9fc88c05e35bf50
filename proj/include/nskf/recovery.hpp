#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nskf/types.hpp"

namespace nskf {

enum class Termination {
  Converged,         // stopping rule satisfied
  MaxIterations,     // iteration budget used up
  NotConverged,      // budget used up with the feasibility residual above tolerance
  Exact,             // nothing to iterate on (empty nullspace or zero data)
  NumericalFailure,  // divergence; the result holds the last good iterate
};

std::string to_string(Termination t);

/// Sensing problem y = C x (+ noise).
struct SensingProblem {
  ComplexMatrix c;
  ComplexVector y;
  double noise_sigma = 0.0;

  Index m() const { return c.rows(); }
  Index n() const { return c.cols(); }
};

struct RecoveryResult {
  std::string solver;
  Index n = 0;
  Index m = 0;
  ComplexVector x_hat;
  int iterations = 0;
  std::vector<double> l1_trace;
  double wall_time_ms = 0.0;
  Termination termination = Termination::Converged;
  std::string message;
};

/// Fields: solver, n, m, iterations, termination, wall_time_ms, l1_trace,
/// x_hat as an array of [re, im] pairs.
nlohmann::json to_json(const RecoveryResult& r);

double l1_norm(const ComplexVector& x);

}  // namespace nskf
