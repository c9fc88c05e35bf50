#pragma once

#include <functional>

#include "nskf/lq.hpp"
#include "nskf/recovery.hpp"
#include "nskf/schedule.hpp"

namespace nskf::nkf {

/// Configuration of the nullspace l1-minimizing Kalman filter.
///
/// Process noise Q(k) = q_scale * I and the scalar observation noise r default
/// to the identity setting; the filter starts from P_v = 0.
struct NkfConfig {
  double q_scale = 1.0;
  double r_scalar = 1.0;
  int max_iter = 500;
  /// Stop when the l1 norm changes by less than stop_tol (relative) over
  /// kStopWindow iterations.
  double stop_tol = 1e-6;
  /// Entries with |x_i| <= zero_mag_eps contribute nothing to the Jacobian.
  double zero_mag_eps = 1e-12;
  /// Joseph-form covariance update instead of P - K C_v P.
  bool joseph_form = false;
  double rank_tol = 1e-12;
  schedule::ScheduleConfig schedule;

  void validate() const;
};

inline constexpr int kStopWindow = 5;

/// Filter state over the nullspace coordinates.
struct NkfState {
  ComplexVector x_v_hat;  // (n - m) nullspace coordinates
  ComplexMatrix p_v;      // (n - m) x (n - m) Hermitian PSD covariance
  ComplexVector x_hat;    // assembled estimate x_p + e_n * x_v_hat
  double l_emp = 0.0;     // ||x_hat||_1
  int k = 0;              // completed updates
};

/// x_v = 0, P_v = 0, l_emp = ||x_p||_1.
NkfState initial_state(const linalg::NullspaceDecomposition& d);

/// Row H with H_i = conj(x_i) / |x_i|, or 0 where |x_i| <= zero_mag_eps.
/// The first-order change of ||x||_1 under dx is Re(H * dx).
Eigen::RowVectorXcd l1_jacobian_row(const ComplexVector& x, double zero_mag_eps);

/// Identity dynamics: the estimate carries over and P_v grows by q_scale * I.
NkfState predict(NkfState state, double q_scale);

/// One measurement update with the l1 norm observed as y_target.
///
/// Throws NumericalFailure if the innovation variance is not positive or a
/// non-finite value appears.
NkfState update(const NkfState& predicted, const ComplexVector& x_p, const ComplexMatrix& e_n,
                double y_target, double r_scalar, double zero_mag_eps, bool joseph_form = false);

/// Called after every update with the iteration index and the new state.
using IterateObserver = std::function<void(int, const NkfState&)>;

/// Full filter run. The returned estimate is the lowest-l1 iterate of the
/// run; l1_trace[0] is ||x_p||_1 and l1_trace[k] the norm after update k.
RecoveryResult solve(const SensingProblem& problem, const NkfConfig& config = {},
                     const IterateObserver& observer = {});

/// Same, reusing an existing factorization.
RecoveryResult solve(const linalg::NullspaceDecomposition& decomp, const NkfConfig& config = {},
                     const IterateObserver& observer = {});

}  // namespace nskf::nkf
