#pragma once

#include "nskf/types.hpp"

namespace nskf::linalg {

struct LqOptions {
  /// Relative threshold on |l1(i,i)|, scaled by the largest row norm of C.
  double rank_tol = 1e-12;
};

/// C = [l1 | 0] * [q1; q2] with [q1; q2] unitary.
///
/// l1 is m x m lower triangular with a real, nonnegative diagonal. The
/// n - m rows of q2 span the nullspace of C.
struct LqFactors {
  ComplexMatrix l1;
  ComplexMatrix q1;  // m x n
  ComplexMatrix q2;  // (n - m) x n
};

/// Nullspace view of a sensing problem: every feasible point is
/// x_p + e_n * x_v for some (n - m)-dimensional x_v.
struct NullspaceDecomposition {
  ComplexMatrix l1;
  ComplexMatrix q1;
  ComplexMatrix e_n;  // n x (n - m), equals q2^H
  ComplexVector x_p;

  Index n() const { return q1.cols(); }
  Index m() const { return q1.rows(); }
  Index nullity() const { return e_n.cols(); }
};

/// LQ factorization computed as the conjugate transpose of a Householder QR
/// of C^H. Requires m <= n and full row rank.
///
/// Throws DimensionMismatch if m > n and RankDeficient if a diagonal entry of
/// l1 falls below rank_tol times the largest row norm of C.
LqFactors lq_factorize(const ComplexMatrix& c, const LqOptions& opts = {});

/// Minimum-l2 solution of C x = y: q1^H * l1^{-1} * y.
ComplexVector particular_solution(const LqFactors& f, const ComplexVector& y);

/// Orthonormal nullspace basis as columns, q2^H.
ComplexMatrix nullspace_basis(const LqFactors& f);

NullspaceDecomposition decompose(const ComplexMatrix& c, const ComplexVector& y,
                                 const LqOptions& opts = {});

/// x_p + e_n * x_v. Feasible for every x_v.
ComplexVector assemble_estimate(const ComplexVector& x_p, const ComplexMatrix& e_n,
                                const ComplexVector& x_v);

namespace detail {
/// Two-pass modified Gram-Schmidt over the columns of q, in place.
void reorthonormalize_columns(ComplexMatrix& q);

/// ||Q^H Q v - v|| / ||v|| for a fixed probe vector v.
double unitarity_probe(const ComplexMatrix& q);
}  // namespace detail

}  // namespace nskf::linalg
