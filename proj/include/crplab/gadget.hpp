#pragma once

#include <array>
#include <utility>

#include "crplab/matrix.hpp"

namespace crplab {

// The fixed 3x3 gadget matrix with rows (1,1,-1), (1,-1,1), (-1,1,1).
// It is symmetric, has determinant 4, and fixes the all-ones vector.
DenseMatrix gadget_matrix();

// ||G v||_p^p (max |(G v)_a| for p = inf) without materializing G.
double gadget_norm_pow(const std::array<double, 3>& v, PNorm p);

// The low-discrepancy bound of the rounding guarantee: 2 + (4/3)^p for
// finite p, 4/3 for p = inf (comparing against the max instead of the sum).
double gadget_prop1_bound(PNorm p);

// A rounding z in {0,1}^3 of u together with the quantities the guarantee
// bounds: discrepancy_pow = ||G(u - z)||_p^p (the inf value for p = inf)
// and sum_dev = 1^T (u - z).
struct GadgetRounding {
  std::array<int, 3> z;
  double discrepancy_pow;
  double sum_dev;
};

// Rounds u in [0,1]^3 to binary z such that, simultaneously,
//   (1) ||G(u - z)||_p^p <= 2 + (4/3)^p,
//   (2) b * 1^T(u - z) >= 0,
//   (3) |1^T(u - z)| <= 2.
// All 8 candidates are tried and the lexicographically smallest valid one is
// returned. An empty candidate set would falsify the guarantee and throws
// LemmaViolation.
GadgetRounding gadget_round(const std::array<double, 3>& u, int b, PNorm p);

// Fast-path rounding by case analysis on sorted u (thresholds 1^T u >= 2 and
// (G u)_3 <= 4/3). Only property (1) above is guaranteed on this path.
std::array<int, 3> gadget_case_round(const std::array<double, 3>& u);

enum class GadgetClass { binary_like, far };

// Distance of the gadget centre G*(1/2 * 1) to the lattice point G z:
// returns ||G(1/2 * 1 - z)||_p^p (inf value for p = inf) and the class,
// binary_like iff z is all-zeros or all-ones. Binary-like points sit at
// exactly 3/2^p (1/2 for inf); all others at >= (2 + 3^p)/2^p (3/2 for inf).
std::pair<double, GadgetClass> gadget_center_distance(const std::array<int, 3>& z, PNorm p);

}  // namespace crplab
