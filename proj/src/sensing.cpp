#include "nskf/sensing.hpp"

#include <cmath>
#include <numbers>

#include "nskf/rng.hpp"

namespace nskf::sensing {

namespace {

// exp(-2 pi i (kr r / n_r + ka a / n_a)) with the phase reduced exactly first.
Complex dft_kernel(Index kr, Index ka, Index r, Index a, Index n_r, Index n_a) {
  const double frac = static_cast<double>((kr * r) % n_r) / static_cast<double>(n_r) +
                      static_cast<double>((ka * a) % n_a) / static_cast<double>(n_a);
  return std::polar(1.0, -2.0 * std::numbers::pi * frac);
}

}  // namespace

Rect SceneSpec::region() const {
  if (target_region) return *target_region;
  return Rect{n_r / 4, n_r / 4 + n_r / 2, n_a / 4, n_a / 4 + n_a / 2};
}

void SceneSpec::validate() const {
  require_dims(n_r >= 1 && n_a >= 1, "SceneSpec: empty grid");
  const Rect t = region();
  require_dims(t.r0 >= 0 && t.r0 <= t.r1 && t.r1 <= n_r && t.a0 >= 0 && t.a0 <= t.a1 &&
                   t.a1 <= n_a,
               "SceneSpec: target region outside the grid");
  require_dims(n_scatterers >= 0 && n_scatterers <= t.area(),
               "SceneSpec: more scatterers than target pixels");
}

ComplexVector gen_sparse_signal(const SignalSpec& spec) {
  require_dims(spec.n >= 0 && spec.s >= 0 && spec.s <= spec.n, "SignalSpec: need 0 <= s <= n");
  ComplexVector x = ComplexVector::Zero(spec.n);
  if (spec.s == 0) return x;
  rng::Xoshiro256 gen(spec.seed);
  for (Index i : rng::sample_without_replacement(gen, spec.n, spec.s)) {
    const double re = gen.normal();
    const double im = gen.normal();
    x(i) = Complex(re, im);
  }
  return x / x.norm();
}

ComplexMatrix gen_gaussian_matrix(Index m, Index n, std::uint64_t seed) {
  require_dims(m >= 1 && n >= 1, "gen_gaussian_matrix: need m, n >= 1");
  rng::Xoshiro256 gen(seed);
  const double scale = std::sqrt(0.5);
  ComplexMatrix c(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) {
      const double re = gen.normal();
      const double im = gen.normal();
      c(i, j) = Complex(scale * re, scale * im);
    }
    c.col(j) /= c.col(j).norm();
  }
  return c;
}

PartialFourier gen_partial_fourier_2d(Index n_r, Index n_a, double keep_fraction,
                                      std::uint64_t seed) {
  require_dims(n_r >= 1 && n_a >= 1, "gen_partial_fourier_2d: empty grid");
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw ConfigError("keep_fraction must lie in (0, 1]");
  }
  const Index big_n = n_r * n_a;
  const auto m = std::max<Index>(
      1, std::min<Index>(big_n, static_cast<Index>(std::llround(keep_fraction * big_n))));
  rng::Xoshiro256 gen(seed);
  PartialFourier out;
  out.kept = rng::sample_without_replacement(gen, big_n, m);
  out.c.resize(m, big_n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(big_n));
  for (Index row = 0; row < m; ++row) {
    const Index kr = out.kept[row] / n_a;
    const Index ka = out.kept[row] % n_a;
    for (Index r = 0; r < n_r; ++r) {
      for (Index a = 0; a < n_a; ++a) {
        out.c(row, r * n_a + a) = scale * dft_kernel(kr, ka, r, a, n_r, n_a);
      }
    }
  }
  return out;
}

ComplexVector measure(const ComplexMatrix& c, const ComplexVector& x, double noise_sigma,
                      std::uint64_t seed) {
  require_dims(c.cols() == x.size(), "measure: x does not match C");
  ComplexVector y = c * x;
  if (noise_sigma > 0.0) {
    rng::Xoshiro256 gen(seed);
    const double scale = noise_sigma * std::sqrt(0.5);
    for (Index i = 0; i < y.size(); ++i) {
      const double re = gen.normal();
      const double im = gen.normal();
      y(i) += Complex(scale * re, scale * im);
    }
  }
  return y;
}

ComplexVector gen_scene(const SceneSpec& spec) {
  spec.validate();
  const Rect t = spec.region();
  ComplexVector x = ComplexVector::Zero(spec.n_r * spec.n_a);
  if (spec.n_scatterers == 0) return x;
  rng::Xoshiro256 gen(spec.seed);
  const Index width = t.a1 - t.a0;
  for (Index k : rng::sample_without_replacement(gen, t.area(), spec.n_scatterers)) {
    const Index r = t.r0 + k / width;
    const Index a = t.a0 + k % width;
    const double re = gen.normal();
    const double im = gen.normal();
    x(r * spec.n_a + a) = Complex(re, im);
  }
  return x;
}

ComplexMatrix reference_image(const ComplexVector& y, const std::vector<Index>& kept, Index n_r,
                              Index n_a) {
  require_dims(static_cast<Index>(kept.size()) == y.size(),
               "reference_image: kept indices do not match y");
  const Index big_n = n_r * n_a;
  for (Index k : kept) require_dims(k >= 0 && k < big_n, "reference_image: bin out of range");
  const double scale = 1.0 / std::sqrt(static_cast<double>(big_n));
  ComplexMatrix img = ComplexMatrix::Zero(n_r, n_a);
  for (size_t f = 0; f < kept.size(); ++f) {
    const Complex v = y(static_cast<Index>(f));
    if (v == Complex(0.0, 0.0)) continue;
    const Index kr = kept[f] / n_a;
    const Index ka = kept[f] % n_a;
    for (Index r = 0; r < n_r; ++r) {
      for (Index a = 0; a < n_a; ++a) {
        img(r, a) += scale * v * std::conj(dft_kernel(kr, ka, r, a, n_r, n_a));
      }
    }
  }
  return img;
}

ComplexVector fourier_samples(const ComplexVector& image, const std::vector<Index>& kept,
                              Index n_r, Index n_a) {
  require_dims(image.size() == n_r * n_a, "fourier_samples: image size mismatch");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_r * n_a));
  ComplexVector y = ComplexVector::Zero(static_cast<Index>(kept.size()));
  for (size_t f = 0; f < kept.size(); ++f) {
    const Index kr = kept[f] / n_a;
    const Index ka = kept[f] % n_a;
    Complex acc(0.0, 0.0);
    for (Index r = 0; r < n_r; ++r) {
      for (Index a = 0; a < n_a; ++a) {
        const Complex v = image(r * n_a + a);
        if (v != Complex(0.0, 0.0)) acc += v * dft_kernel(kr, ka, r, a, n_r, n_a);
      }
    }
    y(static_cast<Index>(f)) = scale * acc;
  }
  return y;
}

ComplexMatrix to_image(const ComplexVector& x, Index n_r, Index n_a) {
  require_dims(x.size() == n_r * n_a, "to_image: size mismatch");
  ComplexMatrix img(n_r, n_a);
  for (Index r = 0; r < n_r; ++r)
    for (Index a = 0; a < n_a; ++a) img(r, a) = x(r * n_a + a);
  return img;
}

ComplexVector vectorize(const ComplexMatrix& image) {
  ComplexVector x(image.size());
  for (Index r = 0; r < image.rows(); ++r)
    for (Index a = 0; a < image.cols(); ++a) x(r * image.cols() + a) = image(r, a);
  return x;
}

}  // namespace nskf::sensing
