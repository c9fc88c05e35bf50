#include "nskf/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace nskf::metrics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_power(const ComplexMatrix& image, const std::vector<Index>& pixels) {
  double sum = 0.0;
  for (Index p : pixels) sum += std::norm(image(p / image.cols(), p % image.cols()));
  return sum / static_cast<double>(pixels.size());
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

double rrmse(const ComplexVector& a_t, const ComplexVector& a_cs) {
  require_dims(a_t.size() == a_cs.size(), "rrmse: length mismatch");
  require_dims(a_t.size() >= 1, "rrmse: empty scatterer set");
  double acc = 0.0;
  for (Index k = 0; k < a_t.size(); ++k) {
    const double ref = std::abs(a_t(k));
    if (ref == 0.0) throw ZeroReferenceAmplitude("rrmse: zero reference amplitude");
    const double e = (ref - std::abs(a_cs(k))) / ref;
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(a_t.size()));
}

double tcr_db(const ComplexMatrix& image, const std::vector<Index>& target,
              const std::vector<Index>& clutter) {
  require_dims(!target.empty() && !clutter.empty(), "tcr_db: empty region");
  for (Index p : target) require_dims(p >= 0 && p < image.size(), "tcr_db: pixel out of range");
  for (Index p : clutter) require_dims(p >= 0 && p < image.size(), "tcr_db: pixel out of range");
  const double t = mean_power(image, target);
  const double c = mean_power(image, clutter);
  if (c == 0.0) return t == 0.0 ? kNaN : std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(t / c);
}

double image_entropy(const ComplexMatrix& image) {
  const double total = image.cwiseAbs2().sum();
  if (!(total > 0.0)) throw ZeroImage("image_entropy: zero image");
  double ie = 0.0;
  for (Index j = 0; j < image.cols(); ++j) {
    for (Index i = 0; i < image.rows(); ++i) {
      const double p = std::norm(image(i, j)) / total;
      if (p > 0.0) ie -= p * std::log(p);
    }
  }
  return std::max(ie, 0.0);
}

double image_contrast(const ComplexMatrix& image) {
  const Eigen::ArrayXXd power = image.cwiseAbs2().array();
  const double mean = power.mean();
  if (!(mean > 0.0)) throw ZeroImage("image_contrast: zero image");
  const double var = (power - mean).square().mean();
  return std::sqrt(var) / mean;
}

std::vector<Index> detect(const ComplexMatrix& image, double threshold_db) {
  const double peak = image.size() ? image.cwiseAbs().maxCoeff() : 0.0;
  const double level = peak * std::pow(10.0, threshold_db / 20.0);
  std::vector<Index> out;
  for (Index r = 0; r < image.rows(); ++r)
    for (Index a = 0; a < image.cols(); ++a)
      if (std::abs(image(r, a)) > level) out.push_back(r * image.cols() + a);
  return out;
}

Detections fa_md(const ComplexMatrix& reconstructed, const ComplexMatrix& reference,
                 double threshold_db) {
  require_dims(reconstructed.rows() == reference.rows() && reconstructed.cols() == reference.cols(),
               "fa_md: grid shape mismatch");
  const auto rec = detect(reconstructed, threshold_db);
  const auto ref = detect(reference, threshold_db);
  std::vector<Index> only_rec, only_ref;
  std::set_difference(rec.begin(), rec.end(), ref.begin(), ref.end(), std::back_inserter(only_rec));
  std::set_difference(ref.begin(), ref.end(), rec.begin(), rec.end(), std::back_inserter(only_ref));
  return {static_cast<Index>(only_rec.size()), static_cast<Index>(only_ref.size())};
}

double l2_error(const ComplexVector& x_true, const ComplexVector& x_hat) {
  require_dims(x_true.size() == x_hat.size(), "l2_error: length mismatch");
  return (x_true - x_hat).norm();
}

std::pair<std::vector<Index>, std::vector<Index>> split_region(Index n_r, Index n_a,
                                                               const Rect& target) {
  std::pair<std::vector<Index>, std::vector<Index>> out;
  for (Index r = 0; r < n_r; ++r)
    for (Index a = 0; a < n_a; ++a)
      (target.contains(r, a) ? out.first : out.second).push_back(r * n_a + a);
  return out;
}

ImageMetrics evaluate(const ComplexMatrix& reconstructed, const ComplexMatrix& reference,
                      const Rect& target, double threshold_db) {
  require_dims(reconstructed.rows() == reference.rows() && reconstructed.cols() == reference.cols(),
               "evaluate: grid shape mismatch");
  ImageMetrics m;
  const auto scatterers = detect(reference, threshold_db);
  if (scatterers.empty()) {
    m.rrmse = kNaN;
  } else {
    ComplexVector a_t(static_cast<Index>(scatterers.size()));
    ComplexVector a_cs(a_t.size());
    const Index cols = reference.cols();
    for (size_t k = 0; k < scatterers.size(); ++k) {
      a_t(k) = reference(scatterers[k] / cols, scatterers[k] % cols);
      a_cs(k) = reconstructed(scatterers[k] / cols, scatterers[k] % cols);
    }
    m.rrmse = rrmse(a_t, a_cs);
  }
  const auto [inside, outside] = split_region(reference.rows(), reference.cols(), target);
  m.tcr_db = (inside.empty() || outside.empty()) ? kNaN : tcr_db(reconstructed, inside, outside);
  const bool nonzero = reconstructed.cwiseAbs2().sum() > 0.0;
  m.ie = nonzero ? image_entropy(reconstructed) : kNaN;
  m.ic = nonzero ? image_contrast(reconstructed) : kNaN;
  const Detections d = fa_md(reconstructed, reference, threshold_db);
  m.fa = d.fa;
  m.md = d.md;
  return m;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_header() { return "solver,n,m,s,rrmse,tcr_db,ie,ic,fa,md,wall_time_ms"; }

std::string csv_row(const MetricsRow& row) {
  const ImageMetrics& x = row.metrics;
  std::string out = row.solver + "," + std::to_string(row.n) + "," + std::to_string(row.m) + "," +
                    std::to_string(row.s) + ",";
  out += row.is_reference ? "" : format_double(x.rrmse);
  out += "," + format_double(x.tcr_db) + "," + format_double(x.ie) + "," + format_double(x.ic) + ",";
  out += row.is_reference ? "," : std::to_string(x.fa) + "," + std::to_string(x.md);
  out += "," + format_double(row.wall_time_ms);
  return out;
}

nlohmann::json to_json(const MetricsRow& row) {
  const ImageMetrics& x = row.metrics;
  nlohmann::json j = {{"solver", row.solver},
                      {"n", row.n},
                      {"m", row.m},
                      {"s", row.s},
                      {"tcr_db", json_number(x.tcr_db)},
                      {"ie", json_number(x.ie)},
                      {"ic", json_number(x.ic)},
                      {"wall_time_ms", row.wall_time_ms}};
  if (!row.is_reference) {
    j["rrmse"] = json_number(x.rrmse);
    j["fa"] = x.fa;
    j["md"] = x.md;
  }
  return j;
}

}  // namespace nskf::metrics
