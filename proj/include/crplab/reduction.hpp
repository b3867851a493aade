#pragma once

#include <string>
#include <vector>

#include "crplab/formula.hpp"
#include "crplab/matrix.hpp"

namespace crplab {

// Constraint-variable incidence matrix of an E3 formula: m x n over
// {-1, 0, 1} with entry sign(literal of v_j in C_i), three nonzeros per row.
DenseMatrix incidence_matrix(const Formula& phi);

// diag(deg(v_1)^{1/p}, ..., deg(v_n)^{1/p}); the identity for p = inf.
// Degree-zero variables yield a zero entry (and a rank-deficient gadget
// block), which the certification layer warns about.
DenseMatrix degree_matrix(const Formula& phi, PNorm p);

// The (m+3n) x 3n reduction matrix
//   [ (1/3)B  (1/3)B  (1/3)B ]
//   [       G (x) D_p        ]
// tagged with its block structure for exact evaluation.
DenseMatrix build_A(const Formula& phi, PNorm p);

// Distance threshold (eps*m*(4/3)^p + (1-eps)*m*2^p + 3m(2+(4/3)^p))^{1/p}.
// Finite p only.
double threshold_r(int m, double eps, PNorm p);

// A matrix/threshold pair as handed to the decision problem, with the
// source formula kept for certification.
struct ReductionInstance {
  DenseMatrix matrix;
  double threshold = 0.0;
  PNorm p = PNorm(1.0);
  double gamma = 1.0;
  Formula source;
};

// NP pipeline instance: A_p(phi) with threshold_r(m, eps, p). The stored
// gamma is the hardness factor gamma(15/16, eps, p) clamped below at 1
// (below the crossover the reduction certifies no gap).
ReductionInstance make_np_instance(const Formula& phi, PNorm p, double eps);

// Pi2 pipeline instance: the (m+3n+2n') x (3n+n') matrix
//   [           A_inf(phi)            |   0    ]
//   [ (2/3) at columns i, n+i, 2n+i   | -2 I_n' ]
//   [               0                 | (8/3) I_n' ]
// with threshold 4/3 and factor 9/8. Requires n' >= 1 universal variables.
ReductionInstance build_A_prime(const Formula& phi);

// All 2^{n'} targets (1/2 * 1_{3n}, w*) with w* in {1/3, 2/3}^{n'}; entry
// 1/3 encodes universal value 0. Ordered by the universal assignment in
// lexicographic order.
std::vector<std::vector<double>> special_targets(const Formula& phi);

// The hardness ratio
//   ((delta*10/2^p + (1-delta)((3/2)^p + 9/2^p)) /
//    (eps*(4/3)^p + (1-eps)*2^p + 3(2+(4/3)^p)))^{1/p},
// evaluated in log space so that p up to 10^4 and beyond stays finite.
double gamma_factor(double delta, double eps, double p);

// gamma(p) = gamma_factor(15/16, 1, p).
double np_hardness_factor(double p);

// The same value through the closed form ((9^p + 159*3^p)/(8^{p+2} + 96*6^p))^{1/p};
// kept as an independent route for cross-checking.
double np_hardness_factor_closed_form(double p);

// Unique root of gamma(p) = 1 on [1, 100] by bisection; the bracket is
// narrowed to width tol.
double find_p0(double tol);

// CSV "p,gamma" with `steps` log-spaced samples of np_hardness_factor on
// [pmin, pmax], 12 significant digits.
std::string gamma_curve_csv(double pmin, double pmax, int steps);

// Writes prefix.mat (matrix text format) and prefix.json (header with
// m, n, n_prime, p, r, gamma and the degree table).
void write_instance(const ReductionInstance& inst, const std::string& prefix);

}  // namespace crplab
