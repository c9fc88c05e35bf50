#include "nskf/nkf.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace nskf::nkf {

namespace {

void symmetrize(ComplexMatrix& p) {
  const Index d = p.rows();
  for (Index j = 0; j < d; ++j) {
    p(j, j) = Complex(p(j, j).real(), 0.0);
    for (Index i = 0; i < j; ++i) {
      const Complex avg = 0.5 * (p(i, j) + std::conj(p(j, i)));
      p(i, j) = avg;
      p(j, i) = std::conj(avg);
    }
  }
}

bool all_finite(const ComplexVector& v) { return v.allFinite(); }

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void NkfConfig::validate() const {
  if (!(q_scale >= 0.0)) throw ConfigError("nkf.q_scale must be >= 0");
  if (!(r_scalar > 0.0)) throw ConfigError("nkf.r_scalar must be > 0");
  if (max_iter < 1) throw ConfigError("nkf.max_iter must be >= 1");
  if (!(stop_tol > 0.0)) throw ConfigError("nkf.stop_tol must be > 0");
  if (!(zero_mag_eps > 0.0)) throw ConfigError("nkf.zero_mag_eps must be > 0");
  schedule.validate();
}

NkfState initial_state(const linalg::NullspaceDecomposition& d) {
  NkfState s;
  s.x_v_hat = ComplexVector::Zero(d.nullity());
  s.p_v = ComplexMatrix::Zero(d.nullity(), d.nullity());
  s.x_hat = d.x_p;
  s.l_emp = l1_norm(d.x_p);
  return s;
}

Eigen::RowVectorXcd l1_jacobian_row(const ComplexVector& x, double zero_mag_eps) {
  Eigen::RowVectorXcd h(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double mag = std::abs(x(i));
    h(i) = mag > zero_mag_eps ? std::conj(x(i)) / mag : Complex(0.0, 0.0);
  }
  return h;
}

NkfState predict(NkfState state, double q_scale) {
  state.p_v.diagonal().array() += Complex(q_scale, 0.0);
  return state;
}

NkfState update(const NkfState& pred, const ComplexVector& x_p, const ComplexMatrix& e_n,
                double y_target, double r_scalar, double zero_mag_eps, bool joseph_form) {
  const Index d = e_n.cols();
  require_dims(pred.x_v_hat.size() == d && pred.p_v.rows() == d && pred.p_v.cols() == d,
               "nkf::update: state does not match nullspace dimension");
  require_dims(x_p.size() == e_n.rows(), "nkf::update: x_p does not match e_n");
  if (!std::isfinite(y_target)) throw NumericalFailure("nkf::update: non-finite target");

  ComplexVector x_prior = pred.x_hat.size() == x_p.size()
                              ? pred.x_hat
                              : linalg::assemble_estimate(x_p, e_n, pred.x_v_hat);
  const double h_prior = l1_norm(x_prior);

  const Eigen::RowVectorXcd c_v = l1_jacobian_row(x_prior, zero_mag_eps) * e_n;
  const ComplexVector pc = pred.p_v * c_v.adjoint();
  const double s = (c_v * pc)(0, 0).real();
  const double sigma2 = s + r_scalar;
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw NumericalFailure("nkf::update: innovation variance " + std::to_string(sigma2));
  }

  const ComplexVector gain = pc / sigma2;
  const double innovation = y_target - h_prior;

  NkfState next;
  next.k = pred.k + 1;
  next.x_v_hat = pred.x_v_hat + gain * innovation;
  next.p_v = pred.p_v;
  if (joseph_form) {
    next.p_v.noalias() -= gain * pc.adjoint();
    next.p_v.noalias() -= pc * gain.adjoint();
    next.p_v.noalias() += (s + r_scalar) * (gain * gain.adjoint());
  } else {
    next.p_v.noalias() -= gain * pc.adjoint();
  }
  symmetrize(next.p_v);

  next.x_hat = linalg::assemble_estimate(x_p, e_n, next.x_v_hat);
  next.l_emp = l1_norm(next.x_hat);
  if (!all_finite(next.x_v_hat) || !next.p_v.allFinite() || !std::isfinite(next.l_emp)) {
    throw NumericalFailure("nkf::update: non-finite state after update");
  }
  return next;
}

RecoveryResult solve(const SensingProblem& problem, const NkfConfig& config,
                     const IterateObserver& observer) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto decomp = linalg::decompose(problem.c, problem.y, {config.rank_tol});
  RecoveryResult r = solve(decomp, config, observer);
  r.wall_time_ms = elapsed_ms(t0);
  return r;
}

RecoveryResult solve(const linalg::NullspaceDecomposition& decomp, const NkfConfig& config,
                     const IterateObserver& observer) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  RecoveryResult result;
  result.solver = "nkf";
  result.n = decomp.n();
  result.m = decomp.m();

  NkfState state = initial_state(decomp);
  result.l1_trace.push_back(state.l_emp);

  if (decomp.nullity() == 0 || state.l_emp == 0.0) {
    result.x_hat = decomp.x_p;
    result.termination = Termination::Exact;
    result.wall_time_ms = elapsed_ms(t0);
    return result;
  }

  schedule::ScheduleState sched(config.schedule);
  ComplexVector best_x = state.x_hat;
  double best_l1 = state.l_emp;
  double l_prev = state.l_emp;
  result.termination = Termination::MaxIterations;

  for (int it = 1; it <= config.max_iter; ++it) {
    NkfState pred = predict(state, config.q_scale);
    auto [target, advanced] = schedule::next_target(sched, state.l_emp, l_prev);
    sched = advanced;

    NkfState next;
    try {
      next = update(pred, decomp.x_p, decomp.e_n, target, config.r_scalar, config.zero_mag_eps,
                    config.joseph_form);
    } catch (const NumericalFailure& e) {
      result.termination = Termination::NumericalFailure;
      result.message = e.what();
      break;
    }
    l_prev = state.l_emp;
    state = std::move(next);
    result.iterations = it;
    result.l1_trace.push_back(state.l_emp);
    if (observer) observer(it, state);

    if (state.l_emp < best_l1) {
      best_l1 = state.l_emp;
      best_x = state.x_hat;
    }
    if (state.l_emp == 0.0) {
      result.termination = Termination::Converged;
      break;
    }
    if (it >= kStopWindow) {
      const double past = result.l1_trace[it - kStopWindow];
      if (std::abs(past - state.l_emp) < config.stop_tol * state.l_emp) {
        result.termination = Termination::Converged;
        break;
      }
    }
  }

  result.x_hat = std::move(best_x);
  result.wall_time_ms = elapsed_ms(t0);
  return result;
}

}  // namespace nskf::nkf
