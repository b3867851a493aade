#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "crplab/errors.hpp"

namespace crplab {

// lp exponent, p in [1, inf]. Infinity is a first-class value: several
// constructions (the Pi2 matrix, degree scaling) branch on it.
class PNorm {
 public:
  explicit PNorm(double p) : p_(p) {
    if (!(p >= 1.0)) throw InputError("p-norm exponent must satisfy p >= 1");
  }
  static PNorm inf() { return PNorm(std::numeric_limits<double>::infinity()); }

  double value() const { return p_; }
  bool is_inf() const { return std::numeric_limits<double>::infinity() == p_; }

  friend bool operator==(const PNorm& a, const PNorm& b) { return a.p_ == b.p_; }

 private:
  double p_;
};

struct AStructure;  // defined below

// Row-major dense matrix of doubles. `structure`, when set, records the
// block layout of a reduction matrix so that norms and enumeration can use
// the exact block decomposition instead of the materialized entries.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;
  std::shared_ptr<const AStructure> structure;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

// Block metadata of a reduction matrix A_p(phi): the incidence matrix B
// (m x n over {-1,0,1}) and the variable degrees. Column layout of A is the
// three n-column groups; rows are the m incidence rows then the 3n gadget
// rows. Everything needed to evaluate ||A y||_p^p without touching the
// deg^{1/p} entries.
struct AStructure {
  int m = 0;
  int n = 0;
  DenseMatrix incidence;        // m x n
  std::vector<int> degree;      // size n
};

// (sum |v_i|^p), or max |v_i| when p = inf. The power form is what every
// lemma identity is stated in, so it is the primitive.
double lp_norm_pow(std::span<const double> v, PNorm p);
double lp_norm(std::span<const double> v, PNorm p);

// True iff the entrywise product x .* y has at least one non-positive and
// at least one non-negative coordinate. A zero product counts as both.
bool sgndiff(std::span<const double> x, std::span<const double> y);

std::vector<double> matvec(const DenseMatrix& m, std::span<const double> x);

// ||A y||_p^p evaluated through the block decomposition:
//   (1/3^p) ||B y_sum||_p^p + sum_j deg(v_j) ||G y_j||_p^p
// (max of the two block maxima for p = inf). y has length 3n.
double structured_norm_pow(const AStructure& s, std::span<const double> y, PNorm p);

// Text format: "matrix <rows> <cols>" header, then row-major entries with
// 17 significant digits.
std::string serialize_matrix(const DenseMatrix& m);
DenseMatrix parse_matrix(const std::string& text);

}  // namespace crplab
