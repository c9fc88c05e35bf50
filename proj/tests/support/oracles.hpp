#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's factorization or solvers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "nskf/rng.hpp"
#include "nskf/sensing.hpp"

namespace oracle {

using nskf::Complex;
using nskf::ComplexMatrix;
using nskf::ComplexVector;
using nskf::Index;

// C^H (C C^H)^{-1} y through the normal equations.
inline ComplexVector min_norm_solution(const ComplexMatrix& c, const ComplexVector& y) {
  const ComplexMatrix g = c * c.adjoint();
  return c.adjoint() * g.partialPivLu().solve(y);
}

inline double l1(const ComplexVector& x) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += std::abs(x(i));
  return s;
}

// Exact basis pursuit optimum over supports of size <= m: least squares on each
// support, keeping the feasible ones.
struct BpOptimum {
  double l1 = std::numeric_limits<double>::infinity();
  ComplexVector x;
};

inline BpOptimum bp_enumerate(const ComplexMatrix& c, const ComplexVector& y) {
  const Index m = c.rows(), n = c.cols();
  BpOptimum best;
  best.x = ComplexVector::Zero(n);
  const double ynorm = y.norm();
  if (ynorm == 0.0) {
    best.l1 = 0.0;
    return best;
  }
  std::vector<Index> idx;
  std::function<void(Index, Index)> rec = [&](Index start, Index left) {
    if (left == 0) {
      ComplexMatrix a(m, static_cast<Index>(idx.size()));
      for (size_t k = 0; k < idx.size(); ++k) a.col(static_cast<Index>(k)) = c.col(idx[k]);
      const ComplexVector z = a.colPivHouseholderQr().solve(y);
      if ((a * z - y).norm() <= 1e-9 * ynorm) {
        const double v = l1(z);
        if (v < best.l1) {
          best.l1 = v;
          best.x.setZero();
          for (size_t k = 0; k < idx.size(); ++k) best.x(idx[k]) = z(static_cast<Index>(k));
        }
      }
      return;
    }
    for (Index j = start; j <= n - left; ++j) {
      idx.push_back(j);
      rec(j + 1, left - 1);
      idx.pop_back();
    }
  };
  for (Index k = 1; k <= m; ++k) rec(0, k);
  return best;
}

// Minimum of a convex function of one complex variable by nested ternary
// search over [-r, r]^2.
inline Complex minimize_convex_2d(const std::function<double(Complex)>& f, double r,
                                  int iters = 120) {
  auto inner = [&](double re) {
    double lo = -r, hi = r;
    for (int i = 0; i < iters; ++i) {
      const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
      if (f({re, a}) <= f({re, b})) hi = b;
      else lo = a;
    }
    return 0.5 * (lo + hi);
  };
  double lo = -r, hi = r;
  for (int i = 0; i < iters; ++i) {
    const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
    if (f({a, inner(a)}) <= f({b, inner(b)})) hi = b;
    else lo = a;
  }
  const double re = 0.5 * (lo + hi);
  return {re, inner(re)};
}

// Random complex matrix without the generators' column normalization.
inline ComplexMatrix random_matrix(Index m, Index n, std::uint64_t seed) {
  nskf::rng::Xoshiro256 g(seed);
  ComplexMatrix c(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) {
      const double re = g.normal();
      const double im = g.normal();
      c(i, j) = Complex(re, im);
    }
  return c;
}

inline ComplexVector random_vector(Index n, std::uint64_t seed) {
  return random_matrix(n, 1, seed).col(0);
}

struct Instance {
  ComplexMatrix c;
  ComplexVector x;
  ComplexVector y;
};

inline Instance gaussian_instance(Index m, Index n, Index s, std::uint64_t seed) {
  Instance in;
  in.c = nskf::sensing::gen_gaussian_matrix(m, n, nskf::rng::derive_seed(seed, {1}));
  in.x = nskf::sensing::gen_sparse_signal({n, s, nskf::rng::derive_seed(seed, {2})});
  in.y = in.c * in.x;
  return in;
}

// Small instances with m >= 2s + 1, where enumeration over supports of size
// <= m attains the complex basis pursuit optimum.
inline Instance small_bp_instance(std::uint64_t seed) {
  nskf::rng::Xoshiro256 g(nskf::rng::derive_seed(seed, {99}));
  const Index m = 3 + g.index_below(4);            // 3..6
  const Index n = m + 1 + g.index_below(8 - m);    // m+1..8
  const Index s = 1 + g.index_below((m - 1) / 2);  // 1..(m-1)/2, capped below
  return gaussian_instance(m, n, std::min<Index>(s, 2), seed);
}

}  // namespace oracle
