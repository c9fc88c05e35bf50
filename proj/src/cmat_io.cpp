#include "nskf/cmat_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace nskf::io {

namespace {

void put_double(std::ostream& out, double v) {
  char buf[32];
  int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  out.write(buf, len);
}

double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError(std::string("cmat: malformed ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void write_cmat(std::ostream& out, const ComplexMatrix& a) {
  out << "cmat 1 " << a.rows() << ' ' << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j > 0) out << ' ';
      put_double(out, a(i, j).real());
      out << ',';
      put_double(out, a(i, j).imag());
    }
    out << '\n';
  }
}

ComplexMatrix read_cmat(std::istream& in) {
  std::string magic;
  int version = 0;
  long long rows = -1, cols = -1;
  if (!(in >> magic >> version >> rows >> cols) || magic != "cmat") {
    throw IoError("cmat: missing or malformed header");
  }
  if (version != 1) throw IoError("cmat: unsupported version " + std::to_string(version));
  if (rows < 0 || cols < 0) throw IoError("cmat: negative dimensions");

  ComplexMatrix a(rows, cols);
  std::string token;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(in >> token)) throw IoError("cmat: truncated data");
      auto comma = token.find(',');
      if (comma == std::string::npos) throw IoError("cmat: entry without ',' separator: " + token);
      std::string_view sv(token);
      double re = parse_double(sv.substr(0, comma), "real part");
      double im = parse_double(sv.substr(comma + 1), "imaginary part");
      if (!std::isfinite(re) || !std::isfinite(im)) throw IoError("cmat: non-finite entry");
      a(i, j) = Complex(re, im);
    }
  }
  if (in >> token) throw IoError("cmat: trailing data after " + std::to_string(rows) + " rows");
  return a;
}

void save_cmat(const std::filesystem::path& path, const ComplexMatrix& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_cmat(out, a);
  if (!out) throw IoError("write failed: " + path.string());
}

ComplexMatrix load_cmat(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  return read_cmat(in);
}

ComplexVector load_cmat_vector(const std::filesystem::path& path) {
  ComplexMatrix a = load_cmat(path);
  if (a.cols() != 1) {
    throw IoError(path.string() + ": expected a column vector, got " + std::to_string(a.cols()) +
                  " columns");
  }
  return a.col(0);
}

void save_indices(const std::filesystem::path& path, const std::vector<Index>& idx) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i > 0) out << ' ';
    out << idx[i];
  }
  out << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<Index> load_indices(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  std::string line;
  std::getline(in, line);
  std::istringstream ss(line);
  std::vector<Index> idx;
  long long v = 0;
  while (ss >> v) idx.push_back(static_cast<Index>(v));
  if (!ss.eof()) throw IoError("malformed index file: " + path.string());
  return idx;
}

}  // namespace nskf::io
