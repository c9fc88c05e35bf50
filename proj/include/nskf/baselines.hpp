#pragma once

#include <vector>

#include "nskf/recovery.hpp"

namespace nskf::baselines {

/// Proximal map of tau * |z|: shrinks the magnitude by tau, keeps the phase.
Complex soft_threshold(Complex z, double tau);

/// Chambolle-Pock for min ||x||_1 s.t. C x = y.
///
/// tau = sigma = 0 selects 0.99 / ||C||_2 with ||C||_2 from power iteration.
struct CpConfig {
  double tau = 0.0;
  double sigma = 0.0;
  double theta = 1.0;
  int max_iter = 20000;
  double stop_tol = 1e-6;
  int power_iters = 50;
  double power_tol = 1e-6;

  void validate() const;
};

/// Largest singular value of c by power iteration on C^H C.
double spectral_norm_estimate(const ComplexMatrix& c, int max_iter = 50, double tol = 1e-6);

/// Step sizes actually used for c; throws ConfigError if tau * sigma * ||C||^2 > 1.
std::pair<double, double> cp_step_sizes(const ComplexMatrix& c, const CpConfig& config);

/// l1_trace holds ||x(k)||_1. Hitting max_iter with the stopping rule unmet
/// gives Termination::NotConverged and the last iterate.
RecoveryResult chambolle_pock_bp(const SensingProblem& problem, const CpConfig& config = {});

/// max_atoms = 0 means min(m, n).
struct OmpConfig {
  Index max_atoms = 0;
  double residual_tol = 1e-10;

  void validate() const;
};

struct OmpResult {
  RecoveryResult result;
  std::vector<Index> support;  // in selection order
};

OmpResult omp(const SensingProblem& problem, const OmpConfig& config = {});

}  // namespace nskf::baselines
