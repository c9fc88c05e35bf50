#include "nskf/lq.hpp"

#include <cmath>
#include <string>

namespace nskf::linalg {

namespace {

constexpr double kUnitarityTol = 1e-10;

// In-place Householder QR of a (rows >= cols). On return the upper triangle
// of a holds R and v holds the unit reflector directions (column k has zeros
// above row k). A zero column produces a zero reflector.
void householder_qr(ComplexMatrix& a, ComplexMatrix& v) {
  const Index rows = a.rows();
  const Index cols = a.cols();
  v.setZero(rows, cols);
  for (Index k = 0; k < cols; ++k) {
    auto x = a.col(k).tail(rows - k);
    const double norm_x = x.norm();
    if (norm_x == 0.0) continue;

    const Complex x0 = x(0);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0, 0.0);
    const Complex alpha = -phase * norm_x;

    ComplexVector u = x;
    u(0) -= alpha;
    const double norm_u = u.norm();
    if (norm_u == 0.0) continue;
    u /= norm_u;

    auto block = a.bottomRightCorner(rows - k, cols - k);
    Eigen::RowVectorXcd w = u.adjoint() * block;
    block.noalias() -= 2.0 * u * w;

    a.col(k).tail(rows - k - 1).setZero();
    a(k, k) = alpha;
    v.col(k).tail(rows - k) = u;
  }
}

// Q = H_0 H_1 ... H_{cols-1}, accumulated backwards into an explicit matrix.
ComplexMatrix accumulate_q(const ComplexMatrix& v) {
  const Index rows = v.rows();
  ComplexMatrix q = ComplexMatrix::Identity(rows, rows);
  for (Index k = v.cols() - 1; k >= 0; --k) {
    auto u = v.col(k).tail(rows - k);
    if (u.squaredNorm() == 0.0) continue;
    auto block = q.bottomRightCorner(rows - k, rows - k);
    Eigen::RowVectorXcd w = u.adjoint() * block;
    block.noalias() -= 2.0 * u * w;
  }
  return q;
}

}  // namespace

namespace detail {

void reorthonormalize_columns(ComplexMatrix& q) {
  for (Index j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < j; ++i) {
        const Complex proj = q.col(i).dot(q.col(j));
        q.col(j) -= proj * q.col(i);
      }
    }
    const double nrm = q.col(j).norm();
    if (nrm > 0.0) q.col(j) /= nrm;
  }
}

double unitarity_probe(const ComplexMatrix& q) {
  const Index n = q.cols();
  if (n == 0) return 0.0;
  ComplexVector v(n);
  for (Index j = 0; j < n; ++j) {
    const double t = 0.7 * static_cast<double>(j);
    v(j) = Complex(1.0 + static_cast<double>(j % 5), 0.0) * Complex(std::cos(t), std::sin(t));
  }
  ComplexVector w = q.adjoint() * (q * v);
  return (w - v).norm() / v.norm();
}

}  // namespace detail

LqFactors lq_factorize(const ComplexMatrix& c, const LqOptions& opts) {
  const Index m = c.rows();
  const Index n = c.cols();
  if (m > n) {
    throw DimensionMismatch("lq_factorize: need m <= n, got " + std::to_string(m) + "x" +
                            std::to_string(n));
  }

  ComplexMatrix r = c.adjoint();  // n x m
  ComplexMatrix v;
  householder_qr(r, v);
  ComplexMatrix q = accumulate_q(v);  // n x n, C^H = q * r

  // Absorb diagonal phases into q so that r(k,k) is real and nonnegative.
  for (Index k = 0; k < m; ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    if (mag == 0.0) continue;
    const Complex phase = d / mag;
    q.col(k) *= phase;
    r.row(k) *= std::conj(phase);
    r(k, k) = Complex(mag, 0.0);
  }

  if (detail::unitarity_probe(q) > kUnitarityTol) {
    detail::reorthonormalize_columns(q);
    r.topRows(m) = (q.leftCols(m).adjoint() * c.adjoint()).triangularView<Eigen::Upper>();
  }

  const double scale = m > 0 ? c.rowwise().norm().maxCoeff() : 0.0;
  for (Index k = 0; k < m; ++k) {
    if (!(std::abs(r(k, k)) >= opts.rank_tol * scale) || scale == 0.0) {
      throw RankDeficient("lq_factorize: |l1(" + std::to_string(k) + "," + std::to_string(k) +
                          ")| = " + std::to_string(std::abs(r(k, k))) +
                          " below rank tolerance");
    }
  }

  LqFactors f;
  f.l1 = r.topRows(m).adjoint();
  f.l1.triangularView<Eigen::StrictlyUpper>().setZero();
  f.q1 = q.leftCols(m).adjoint();
  f.q2 = q.rightCols(n - m).adjoint();
  return f;
}

ComplexVector particular_solution(const LqFactors& f, const ComplexVector& y) {
  require_dims(y.size() == f.l1.rows(), "particular_solution: y has " +
                                            std::to_string(y.size()) + " entries, expected " +
                                            std::to_string(f.l1.rows()));
  ComplexVector z = f.l1.triangularView<Eigen::Lower>().solve(y);
  return f.q1.adjoint() * z;
}

ComplexMatrix nullspace_basis(const LqFactors& f) { return f.q2.adjoint(); }

NullspaceDecomposition decompose(const ComplexMatrix& c, const ComplexVector& y,
                                 const LqOptions& opts) {
  require_dims(y.size() == c.rows(), "decompose: y length does not match rows of C");
  LqFactors f = lq_factorize(c, opts);
  NullspaceDecomposition d;
  d.x_p = particular_solution(f, y);
  d.e_n = nullspace_basis(f);
  d.l1 = std::move(f.l1);
  d.q1 = std::move(f.q1);
  return d;
}

ComplexVector assemble_estimate(const ComplexVector& x_p, const ComplexMatrix& e_n,
                                const ComplexVector& x_v) {
  require_dims(e_n.rows() == x_p.size(), "assemble_estimate: e_n rows != len(x_p)");
  require_dims(e_n.cols() == x_v.size(), "assemble_estimate: e_n cols != len(x_v)");
  ComplexVector x = x_p;
  x.noalias() += e_n * x_v;
  return x;
}

}  // namespace nskf::linalg
