#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nskf/types.hpp"

namespace nskf::sensing {

struct SignalSpec {
  Index n = 0;
  Index s = 0;
  std::uint64_t seed = 0;
};

/// Pixels are vectorized row-major: p = r * n_a + a.
struct SceneSpec {
  Index n_r = 32;
  Index n_a = 32;
  Index n_scatterers = 40;
  /// Defaults to the central half-size rectangle of the grid.
  std::optional<Rect> target_region;
  std::uint64_t seed = 0;

  Rect region() const;
  void validate() const;
};

/// s-sparse unit-norm vector. Draw order: support (sorted), then re and im of
/// each support entry in ascending index order. s = 0 gives the zero vector.
ComplexVector gen_sparse_signal(const SignalSpec& spec);

/// re/im ~ N(0, 1/2) drawn column by column, then columns scaled to unit norm.
ComplexMatrix gen_gaussian_matrix(Index m, Index n, std::uint64_t seed);

struct PartialFourier {
  ComplexMatrix c;
  std::vector<Index> kept;  // frequency indices kr * n_a + ka, sorted
};

/// Rows of the unitary 2-D DFT at m = round(keep_fraction * n_r * n_a)
/// uniformly chosen frequency pairs.
PartialFourier gen_partial_fourier_2d(Index n_r, Index n_a, double keep_fraction,
                                      std::uint64_t seed);

/// C x + eta, eta complex Gaussian with E|eta_i|^2 = noise_sigma^2.
ComplexVector measure(const ComplexMatrix& c, const ComplexVector& x, double noise_sigma,
                      std::uint64_t seed);

/// Scatterer pixels chosen uniformly inside the target region, amplitudes
/// with re/im ~ N(0, 1).
ComplexVector gen_scene(const SceneSpec& spec);

/// Zero-filled inverse 2-D DFT of measurements taken at the kept bins.
/// Returned as an n_r x n_a image.
ComplexMatrix reference_image(const ComplexVector& y, const std::vector<Index>& kept, Index n_r,
                              Index n_a);

/// Unitary forward 2-D DFT of a vectorized image at the given bins.
ComplexVector fourier_samples(const ComplexVector& image, const std::vector<Index>& kept,
                              Index n_r, Index n_a);

ComplexMatrix to_image(const ComplexVector& x, Index n_r, Index n_a);
ComplexVector vectorize(const ComplexMatrix& image);

}  // namespace nskf::sensing
