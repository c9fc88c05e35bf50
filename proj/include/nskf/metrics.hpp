#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "nskf/types.hpp"

namespace nskf::metrics {

/// sqrt(mean(((|a_t| - |a_cs|) / |a_t|)^2)). Throws ZeroReferenceAmplitude.
double rrmse(const ComplexVector& a_t, const ComplexVector& a_cs);

/// 10 log10 of mean target power over mean clutter power. Regions are lists
/// of row-major pixel indices into the image.
///
/// Zero clutter power gives +infinity (NaN if the target power is zero too).
double tcr_db(const ComplexMatrix& image, const std::vector<Index>& target,
              const std::vector<Index>& clutter);

/// Entropy in nats of the normalized power distribution. Throws ZeroImage.
double image_entropy(const ComplexMatrix& image);

/// Standard deviation of |I|^2 over its mean. Throws ZeroImage.
double image_contrast(const ComplexMatrix& image);

/// Pixels with |I| > max|I| * 10^(threshold_db / 20), row-major indices.
std::vector<Index> detect(const ComplexMatrix& image, double threshold_db);

struct Detections {
  Index fa = 0;
  Index md = 0;
};

Detections fa_md(const ComplexMatrix& reconstructed, const ComplexMatrix& reference,
                 double threshold_db = -30.0);

double l2_error(const ComplexVector& x_true, const ComplexVector& x_hat);

/// Pixel index lists inside and outside a rectangle.
std::pair<std::vector<Index>, std::vector<Index>> split_region(Index n_r, Index n_a,
                                                               const Rect& target);

/// NaN marks a metric that is undefined for the image (empty detection set,
/// zero image).
struct ImageMetrics {
  double rrmse = 0.0;
  double tcr_db = 0.0;
  double ie = 0.0;
  double ic = 0.0;
  Index fa = 0;
  Index md = 0;
};

/// RRMSE is evaluated at the pixels detected in the reference.
ImageMetrics evaluate(const ComplexMatrix& reconstructed, const ComplexMatrix& reference,
                      const Rect& target, double threshold_db = -30.0);

/// One table row. Fields left out for a reference image are written empty.
struct MetricsRow {
  std::string solver;
  Index n = 0;
  Index m = 0;
  Index s = 0;
  ImageMetrics metrics;
  double wall_time_ms = 0.0;
  bool is_reference = false;
};

std::string csv_header();
std::string csv_row(const MetricsRow& row);
nlohmann::json to_json(const MetricsRow& row);

/// Shortest decimal form that reads back to the same double; "inf", "-inf",
/// "nan" for the special values.
std::string format_double(double v);

}  // namespace nskf::metrics
