#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "nskf/metrics.hpp"
#include "support/oracles.hpp"

using namespace nskf;
using namespace nskf::metrics;

namespace {

ComplexMatrix random_image(Index r, Index a, std::uint64_t seed) { return oracle::random_matrix(r, a, seed); }

}  // namespace

TEST(Rrmse, Examples) {
  const ComplexVector a = oracle::random_vector(5, 1);
  EXPECT_EQ(rrmse(a, a), 0.0);
  EXPECT_DOUBLE_EQ(rrmse(ComplexVector::Constant(1, 2.0), ComplexVector::Constant(1, 1.0)), 0.5);
  EXPECT_DOUBLE_EQ(rrmse(Eigen::Vector2cd(2, 4), Eigen::Vector2cd(1, 2)), 0.5);
  EXPECT_THROW(rrmse(Eigen::Vector2cd(0, 4), Eigen::Vector2cd(1, 2)), ZeroReferenceAmplitude);
  EXPECT_THROW(rrmse(Eigen::Vector2cd(1, 4), ComplexVector::Constant(1, 1.0)), DimensionMismatch);
}

TEST(Rrmse, PhaseInvariant) {
  const ComplexVector t = oracle::random_vector(8, 2);
  const ComplexVector c = oracle::random_vector(8, 3);
  ComplexVector rot = c;
  rng::Xoshiro256 g(1);
  for (Index k = 0; k < 8; ++k) rot(k) *= std::polar(1.0, 6.28 * g.uniform());
  EXPECT_NEAR(rrmse(t, c), rrmse(t, rot), 1e-14);
}

TEST(Tcr, Examples) {
  ComplexMatrix img(1, 4);
  img << 2, Complex(0, 2), 1, -1;
  EXPECT_NEAR(tcr_db(img, {0, 1}, {2, 3}), 6.0206, 1e-4);
  EXPECT_NEAR(tcr_db(img, {0, 1}, {2, 3}), 10 * std::log10(4.0), 1e-12);
  EXPECT_NEAR(tcr_db(img, {2}, {3}), 0.0, 1e-15);
  img(2) = img(3) = 0;
  EXPECT_EQ(tcr_db(img, {0, 1}, {2, 3}), std::numeric_limits<double>::infinity());
  EXPECT_TRUE(std::isnan(tcr_db(ComplexMatrix::Zero(1, 4), {0, 1}, {2, 3})));
  EXPECT_THROW(tcr_db(img, {}, {2}), DimensionMismatch);
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(image_entropy(ComplexMatrix::Constant(2, 2, Complex(0, 1))), std::log(4.0), 1e-12);
  ComplexMatrix one = ComplexMatrix::Zero(3, 3);
  one(1, 2) = Complex(3, -1);
  EXPECT_EQ(image_entropy(one), 0.0);
  EXPECT_THROW(image_entropy(ComplexMatrix::Zero(2, 2)), ZeroImage);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const double ie = image_entropy(random_image(5, 7, s));
    EXPECT_GE(ie, 0.0);
    EXPECT_LE(ie, std::log(35.0) + 1e-12);
  }
}

TEST(Entropy, TwoPixelSweep) {
  double best = -1.0, best_p = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    ComplexMatrix img(1, 2);
    img << std::sqrt(p), std::sqrt(1 - p);
    const double ie = image_entropy(img);
    if (ie > best) {
      best = ie;
      best_p = p;
    }
    if (i == 0 || i == 100) EXPECT_EQ(ie, 0.0);
  }
  EXPECT_DOUBLE_EQ(best_p, 0.5);
  EXPECT_NEAR(best, std::log(2.0), 1e-15);
}

TEST(Contrast, Examples) {
  EXPECT_EQ(image_contrast(ComplexMatrix::Constant(3, 3, Complex(1, 1))), 0.0);
  ComplexMatrix two(1, 2);
  two << 0, std::sqrt(2.0);
  EXPECT_NEAR(image_contrast(two), 1.0, 1e-15);
  EXPECT_THROW(image_contrast(ComplexMatrix::Zero(2, 2)), ZeroImage);
}

TEST(MetricsProperty, ScaleInvariance) {
  rng::Xoshiro256 g(6);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const ComplexMatrix img = random_image(6, 6, 100 + s);
    const Complex alpha = std::polar(0.01 + 10 * g.uniform(), 6.28 * g.uniform());
    const ComplexMatrix scaled = alpha * img;
    EXPECT_NEAR(image_contrast(scaled), image_contrast(img), 1e-12);
    EXPECT_NEAR(image_entropy(scaled), image_entropy(img), 1e-12);
    const auto [t, c] = split_region(6, 6, Rect{1, 4, 2, 5});
    EXPECT_NEAR(tcr_db(scaled, t, c), tcr_db(img, t, c), 1e-10);
  }
}

TEST(FaMd, Examples) {
  const ComplexMatrix ref = random_image(4, 4, 1);
  EXPECT_EQ(fa_md(ref, ref).fa, 0);
  EXPECT_EQ(fa_md(ref, ref).md, 0);
  const auto d = fa_md(ComplexMatrix::Zero(4, 4), ref);
  EXPECT_EQ(d.fa, 0);
  EXPECT_EQ(d.md, static_cast<Index>(detect(ref, -30).size()));

  ComplexMatrix sparse_ref = ComplexMatrix::Zero(4, 4);
  sparse_ref(0, 0) = 1.0;
  sparse_ref(2, 3) = Complex(0, 0.5);
  ComplexMatrix rec = sparse_ref;
  rec(3, 1) = 0.8;
  const auto extra = fa_md(rec, sparse_ref);
  EXPECT_EQ(extra.fa, 1);
  EXPECT_EQ(extra.md, 0);
  EXPECT_THROW(fa_md(rec, ComplexMatrix::Zero(3, 4)), DimensionMismatch);
}

TEST(FaMd, SymmetricDifference) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    ComplexMatrix a = random_image(5, 5, s), b = random_image(5, 5, 100 + s);
    a = a.cwiseProduct(a.cwiseProduct(a));  // widen the dynamic range
    b = b.cwiseProduct(b.cwiseProduct(b));
    const auto da = detect(a, -20), db = detect(b, -20);
    std::vector<Index> sym;
    std::set_symmetric_difference(da.begin(), da.end(), db.begin(), db.end(), std::back_inserter(sym));
    const auto d = fa_md(a, b, -20);
    EXPECT_EQ(d.fa + d.md, static_cast<Index>(sym.size()));
  }
}

TEST(L2Error, Examples) {
  const ComplexVector x = oracle::random_vector(4, 1);
  EXPECT_EQ(l2_error(x, x), 0.0);
  EXPECT_DOUBLE_EQ(l2_error(Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1)), std::sqrt(2.0));
  EXPECT_THROW(l2_error(x, ComplexVector::Zero(3)), DimensionMismatch);
  const Complex ph = std::polar(1.0, 0.7);
  EXPECT_GT(l2_error(x, ph * x), 0.1);
  EXPECT_NEAR(l2_error(ph * x, ph * x), 0.0, 1e-15);
}

TEST(Evaluate, PerfectReconstruction) {
  ComplexMatrix ref = ComplexMatrix::Zero(8, 8);
  ref(3, 3) = 2.0;
  ref(4, 5) = Complex(0, -1);
  const auto m = evaluate(ref, ref, Rect{2, 6, 2, 6});
  EXPECT_EQ(m.rrmse, 0.0);
  EXPECT_EQ(m.tcr_db, std::numeric_limits<double>::infinity());
  EXPECT_EQ(m.fa, 0);
  EXPECT_EQ(m.md, 0);
  EXPECT_NEAR(m.ie, image_entropy(ref), 0.0);
  const auto z = evaluate(ComplexMatrix::Zero(8, 8), ref, Rect{2, 6, 2, 6});
  EXPECT_TRUE(std::isnan(z.ie));
  EXPECT_EQ(z.md, 2);
}

TEST(Rows, CsvAndJson) {
  MetricsRow row{"nkf", 1024, 256, 40, {0.25, 12.5, 3.0, 1.5, 2, 1}, 10.5, false};
  EXPECT_EQ(csv_header(), "solver,n,m,s,rrmse,tcr_db,ie,ic,fa,md,wall_time_ms");
  EXPECT_EQ(csv_row(row), "nkf,1024,256,40,0.25,12.5,3,1.5,2,1,10.5");
  row.is_reference = true;
  row.solver = "rd";
  EXPECT_EQ(csv_row(row), "rd,1024,256,40,,12.5,3,1.5,,,10.5");
  EXPECT_FALSE(to_json(row).contains("fa"));
  row.metrics.tcr_db = std::numeric_limits<double>::infinity();
  EXPECT_EQ(to_json(row)["tcr_db"], "inf");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}
