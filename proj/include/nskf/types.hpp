#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nskf {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The sensing matrix does not have full row rank at the configured tolerance.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Divergence inside a filter update: nonpositive innovation variance or a
/// non-finite value.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class ZeroReferenceAmplitude : public Error {
 public:
  using Error::Error;
};

class ZeroImage : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Half-open pixel rectangle [r0, r1) x [a0, a1) on a range x azimuth grid.
struct Rect {
  Index r0 = 0, r1 = 0, a0 = 0, a1 = 0;

  bool contains(Index r, Index a) const { return r >= r0 && r < r1 && a >= a0 && a < a1; }
  Index area() const { return (r1 - r0) * (a1 - a0); }
};

inline void require_dims(bool ok, const std::string& what) {
  if (!ok) throw DimensionMismatch(what);
}

}  // namespace nskf
