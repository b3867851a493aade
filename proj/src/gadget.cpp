#include "crplab/gadget.hpp"

#include <algorithm>
#include <cmath>

namespace crplab {

namespace {

constexpr int kG[3][3] = {{1, 1, -1}, {1, -1, 1}, {-1, 1, 1}};

std::array<double, 3> gadget_apply(const std::array<double, 3>& v) {
  return {v[0] + v[1] - v[2], v[0] - v[1] + v[2], -v[0] + v[1] + v[2]};
}

}  // namespace

DenseMatrix gadget_matrix() {
  DenseMatrix g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g.at(i, j) = kG[i][j];
  return g;
}

double gadget_norm_pow(const std::array<double, 3>& v, PNorm p) {
  const std::array<double, 3> gv = gadget_apply(v);
  return lp_norm_pow(std::span<const double>(gv.data(), 3), p);
}

double gadget_prop1_bound(PNorm p) {
  if (p.is_inf()) return 4.0 / 3.0;
  return 2.0 + std::pow(4.0 / 3.0, p.value());
}

GadgetRounding gadget_round(const std::array<double, 3>& u, int b, PNorm p) {
  if (b != 1 && b != -1) throw InputError("gadget_round: b must be +1 or -1");
  for (double ui : u)
    if (ui < -1e-12 || ui > 1.0 + 1e-12) throw InputError("gadget_round: u must lie in [0,1]^3");

  const double bound = gadget_prop1_bound(p);
  // Relative guard so grid points sitting exactly on a bound still qualify.
  const double guard = 1e-9 * (1.0 + bound);

  bool found = false;
  GadgetRounding best{};
  for (int z0 = 0; z0 <= 1; ++z0)
    for (int z1 = 0; z1 <= 1; ++z1)
      for (int z2 = 0; z2 <= 1; ++z2) {
        const std::array<double, 3> d = {u[0] - z0, u[1] - z1, u[2] - z2};
        const double disc = gadget_norm_pow(d, p);
        const double sum = d[0] + d[1] + d[2];
        if (disc > bound + guard) continue;
        if (b * sum < -1e-12) continue;
        if (std::fabs(sum) > 2.0 + 1e-12) continue;
        if (!found) {
          best = {{z0, z1, z2}, disc, sum};
          found = true;  // candidates visited in lexicographic order
        }
      }
  if (!found)
    throw LemmaViolation("gadget_round: no binary rounding satisfies all three properties");
  return best;
}

std::array<int, 3> gadget_case_round(const std::array<double, 3>& u) {
  // Sort u ascending, remember where each sorted slot came from. Ties keep
  // the original order so the un-permuted result is deterministic.
  std::array<int, 3> idx = {0, 1, 2};
  std::sort(idx.begin(), idx.end(),
            [&u](int a, int b) { return u[a] < u[b] || (u[a] == u[b] && a < b); });
  const std::array<double, 3> s = {u[idx[0]], u[idx[1]], u[idx[2]]};

  const double total = s[0] + s[1] + s[2];
  const double g3 = -s[0] + s[1] + s[2];

  std::array<int, 3> z_sorted{};
  if (total >= 2.0) {
    z_sorted = {0, 1, 1};
  } else if (g3 <= 4.0 / 3.0) {
    z_sorted = {0, 0, 0};
  } else {
    z_sorted = {0, 0, 1};
  }

  std::array<int, 3> z{};
  for (int slot = 0; slot < 3; ++slot) z[idx[slot]] = z_sorted[slot];
  return z;
}

std::pair<double, GadgetClass> gadget_center_distance(const std::array<int, 3>& z, PNorm p) {
  const std::array<double, 3> d = {0.5 - z[0], 0.5 - z[1], 0.5 - z[2]};
  const double value = gadget_norm_pow(d, p);
  const bool binary_like = (z[0] == 0 && z[1] == 0 && z[2] == 0) || (z[0] == 1 && z[1] == 1 && z[2] == 1);
  return {value, binary_like ? GadgetClass::binary_like : GadgetClass::far};
}

}  // namespace crplab
