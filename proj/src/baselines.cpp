#include "nskf/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace nskf::baselines {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Complex soft_threshold(Complex z, double tau) {
  const double mag = std::abs(z);
  if (mag <= tau) return {0.0, 0.0};
  return (1.0 - tau / mag) * z;
}

void CpConfig::validate() const {
  if (tau < 0.0 || sigma < 0.0) throw ConfigError("cp.tau and cp.sigma must be >= 0");
  if ((tau == 0.0) != (sigma == 0.0)) throw ConfigError("cp.tau and cp.sigma must be set together");
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("cp.theta must lie in [0, 1]");
  if (max_iter < 1) throw ConfigError("cp.max_iter must be >= 1");
  if (!(stop_tol > 0.0)) throw ConfigError("cp.stop_tol must be > 0");
  if (power_iters < 1) throw ConfigError("cp.power_iters must be >= 1");
}

double spectral_norm_estimate(const ComplexMatrix& c, int max_iter, double tol) {
  if (c.size() == 0) return 0.0;
  ComplexVector v = ComplexVector::Constant(c.cols(), Complex(1.0 / std::sqrt(double(c.cols())), 0.0));
  double est = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    ComplexVector w = c.adjoint() * (c * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double next = std::sqrt(nw);
    v = w / nw;
    if (it > 0 && std::abs(next - est) <= tol * next) return next;
    est = next;
  }
  return est;
}

std::pair<double, double> cp_step_sizes(const ComplexMatrix& c, const CpConfig& config) {
  config.validate();
  const double norm = spectral_norm_estimate(c, config.power_iters, config.power_tol);
  if (config.tau == 0.0) {
    const double step = norm > 0.0 ? 0.99 / norm : 1.0;
    return {step, step};
  }
  if (config.tau * config.sigma * norm * norm > 1.0) {
    throw ConfigError("cp: tau * sigma * ||C||^2 exceeds 1");
  }
  return {config.tau, config.sigma};
}

RecoveryResult chambolle_pock_bp(const SensingProblem& problem, const CpConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const ComplexMatrix& c = problem.c;
  const ComplexVector& y = problem.y;
  require_dims(y.size() == c.rows(), "chambolle_pock_bp: y does not match C");
  require_dims(c.rows() <= c.cols(), "chambolle_pock_bp: requires m <= n");

  RecoveryResult r;
  r.solver = "cp";
  r.m = c.rows();
  r.n = c.cols();

  const double y_norm = y.norm();
  if (y_norm == 0.0) {
    r.x_hat = ComplexVector::Zero(r.n);
    r.l1_trace.push_back(0.0);
    r.termination = Termination::Exact;
    r.wall_time_ms = elapsed_ms(t0);
    return r;
  }

  const auto [tau, sigma] = cp_step_sizes(c, config);
  const double theta = config.theta;

  ComplexVector x = ComplexVector::Zero(r.n);
  ComplexVector x_prev(r.n);
  ComplexVector p = ComplexVector::Zero(r.m);
  ComplexVector cx = ComplexVector::Zero(r.m);
  ComplexVector cx_prev(r.m);
  ComplexVector grad(r.n);

  r.termination = Termination::NotConverged;
  for (int it = 1; it <= config.max_iter; ++it) {
    // C * xbar, with xbar = x + theta * (x - x_prev), from the cached products.
    if (it == 1) {
      p.noalias() += sigma * (cx - y);
    } else {
      p.noalias() += sigma * ((1.0 + theta) * cx - theta * cx_prev - y);
    }
    grad.noalias() = c.adjoint() * p;
    x_prev = x;
    for (Index i = 0; i < r.n; ++i) x(i) = soft_threshold(x(i) - tau * grad(i), tau);
    cx_prev = cx;
    cx.noalias() = c * x;

    r.iterations = it;
    r.l1_trace.push_back(l1_norm(x));

    const double x_norm = x.norm();
    const double residual = (cx - y).norm() / y_norm;
    const double change = x_norm > 0.0 ? (x - x_prev).norm() / x_norm : 1.0;
    if (!std::isfinite(residual) || !std::isfinite(change)) {
      r.termination = Termination::NumericalFailure;
      r.message = "cp: non-finite iterate";
      x = x_prev;
      break;
    }
    if (std::max(residual, change) < config.stop_tol) {
      r.termination = Termination::Converged;
      break;
    }
  }
  if (r.termination == Termination::NotConverged) {
    r.message = "cp: max_iter reached with the stopping rule unmet";
  }
  r.x_hat = std::move(x);
  r.wall_time_ms = elapsed_ms(t0);
  return r;
}

void OmpConfig::validate() const {
  if (max_atoms < 0) throw ConfigError("omp.max_atoms must be >= 0");
  if (!(residual_tol >= 0.0)) throw ConfigError("omp.residual_tol must be >= 0");
}

OmpResult omp(const SensingProblem& problem, const OmpConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const ComplexMatrix& c = problem.c;
  const ComplexVector& y = problem.y;
  require_dims(y.size() == c.rows(), "omp: y does not match C");
  const Index m = c.rows();
  const Index n = c.cols();
  const Index cap = std::min(m, n);
  if (config.max_atoms > cap) throw ConfigError("omp.max_atoms exceeds min(m, n)");
  const Index max_atoms = config.max_atoms == 0 ? cap : config.max_atoms;

  OmpResult out;
  RecoveryResult& r = out.result;
  r.solver = "omp";
  r.m = m;
  r.n = n;
  r.x_hat = ComplexVector::Zero(n);
  r.termination = Termination::Converged;

  const RealVector col_norms = c.colwise().norm().transpose();
  const double y_norm = y.norm();
  const double stop = config.residual_tol * y_norm;

  ComplexMatrix q(m, max_atoms);  // orthonormal basis of the selected columns
  ComplexMatrix rr = ComplexMatrix::Zero(max_atoms, max_atoms);
  ComplexVector qty(max_atoms);
  std::vector<bool> used(n, false);
  ComplexVector residual = y;

  if (y_norm == 0.0) {
    r.termination = Termination::Exact;
    r.wall_time_ms = elapsed_ms(t0);
    return out;
  }

  Index k = 0;
  while (k < max_atoms && residual.norm() > stop) {
    const ComplexVector corr = c.adjoint() * residual;
    Index best = -1;
    double best_score = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (used[j] || col_norms(j) == 0.0) continue;
      const double score = std::abs(corr(j)) / col_norms(j);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best < 0) break;

    // Classical Gram-Schmidt with one reorthogonalization pass.
    ComplexVector v = c.col(best);
    ComplexVector coeff = ComplexVector::Zero(k);
    for (int pass = 0; pass < 2 && k > 0; ++pass) {
      const ComplexVector h = q.leftCols(k).adjoint() * v;
      v.noalias() -= q.leftCols(k) * h;
      coeff += h;
    }
    const double rkk = v.norm();
    if (rkk <= 1e-12 * col_norms(best)) {
      used[best] = true;  // numerically dependent on the current support
      continue;
    }
    q.col(k) = v / rkk;
    rr.block(0, k, k, 1) = coeff;
    rr(k, k) = rkk;
    qty(k) = q.col(k).dot(y);
    used[best] = true;
    out.support.push_back(best);
    ++k;

    residual = y - q.leftCols(k) * qty.head(k);
    const ComplexVector z =
        rr.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(qty.head(k));
    double l1 = 0.0;
    for (Index i = 0; i < k; ++i) l1 += std::abs(z(i));
    r.l1_trace.push_back(l1);
  }

  if (k > 0) {
    const ComplexVector z =
        rr.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(qty.head(k));
    for (Index i = 0; i < k; ++i) r.x_hat(out.support[i]) = z(i);
  }
  r.iterations = static_cast<int>(k);
  if (residual.norm() > stop) r.termination = Termination::MaxIterations;
  r.wall_time_ms = elapsed_ms(t0);
  return out;
}

}  // namespace nskf::baselines
