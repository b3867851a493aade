#include "crplab/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "crplab/gadget.hpp"

namespace crplab {

double lp_norm_pow(std::span<const double> v, PNorm p) {
  if (p.is_inf()) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::fabs(x));
    return mx;
  }
  const double pe = p.value();
  double s = 0.0;
  if (pe == 1.0) {
    for (double x : v) s += std::fabs(x);
  } else if (pe == 2.0) {
    for (double x : v) s += x * x;
  } else {
    for (double x : v) s += std::pow(std::fabs(x), pe);
  }
  return s;
}

double lp_norm(std::span<const double> v, PNorm p) {
  const double s = lp_norm_pow(v, p);
  if (p.is_inf()) return s;
  const double pe = p.value();
  if (pe == 1.0) return s;
  if (pe == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / pe);
}

bool sgndiff(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("sgndiff: length mismatch");
  bool has_nonpos = false;
  bool has_nonneg = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double prod = x[i] * y[i];
    if (prod <= 0.0) has_nonpos = true;
    if (prod >= 0.0) has_nonneg = true;
  }
  return has_nonpos && has_nonneg;
}

std::vector<double> matvec(const DenseMatrix& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.cols) throw InputError("matvec: dimension mismatch");
  std::vector<double> out(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    const double* row = m.a.data() + static_cast<std::size_t>(i) * m.cols;
    for (int j = 0; j < m.cols; ++j) s += row[j] * x[j];
    out[i] = s;
  }
  return out;
}

double structured_norm_pow(const AStructure& s, std::span<const double> y, PNorm p) {
  const int n = s.n;
  if (static_cast<int>(y.size()) != 3 * n) throw InputError("structured_norm_pow: y must have length 3n");

  std::vector<double> ysum(n);
  for (int j = 0; j < n; ++j) ysum[j] = y[j] + y[n + j] + y[2 * n + j];
  const std::vector<double> bys = matvec(s.incidence, ysum);

  if (p.is_inf()) {
    double mx = 0.0;
    for (double v : bys) mx = std::max(mx, std::fabs(v) / 3.0);
    for (int j = 0; j < n; ++j) {
      const std::array<double, 3> yj = {y[j], y[n + j], y[2 * n + j]};
      mx = std::max(mx, gadget_norm_pow(yj, p));  // max |(G y_j)_a|; D_inf = I
    }
    return mx;
  }

  const double pe = p.value();
  double total = lp_norm_pow(bys, p) / std::pow(3.0, pe);
  for (int j = 0; j < n; ++j) {
    const std::array<double, 3> yj = {y[j], y[n + j], y[2 * n + j]};
    total += static_cast<double>(s.degree[j]) * gadget_norm_pow(yj, p);
  }
  return total;
}

std::string serialize_matrix(const DenseMatrix& m) {
  std::string out = "matrix " + std::to_string(m.rows) + " " + std::to_string(m.cols) + "\n";
  char buf[64];
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m.at(i, j));
      out += buf;
      out += (j + 1 == m.cols) ? '\n' : ' ';
    }
  }
  return out;
}

DenseMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  int rows = 0;
  int cols = 0;
  if (!(in >> tag >> rows >> cols) || tag != "matrix")
    throw InputError("matrix parse: expected 'matrix <rows> <cols>' header");
  if (rows <= 0 || cols <= 0) throw InputError("matrix parse: non-positive dimensions");
  DenseMatrix m(rows, cols);
  for (std::size_t k = 0; k < m.a.size(); ++k) {
    if (!(in >> m.a[k])) throw InputError("matrix parse: expected " + std::to_string(m.a.size()) + " entries");
  }
  double extra;
  if (in >> extra) throw InputError("matrix parse: trailing entries beyond rows*cols");
  return m;
}

}  // namespace crplab
