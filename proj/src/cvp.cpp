#include "crplab/cvp.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "crplab/gadget.hpp"

namespace crplab {

namespace {

constexpr double kEps = 1e-9;

long long llceil(double v) { return static_cast<long long>(std::ceil(v)); }
long long llfloor(double v) { return static_cast<long long>(std::floor(v)); }

// Colex order: compare the last coordinate first. Used for all minimizer
// tie-breaks so that results are independent of visit order.
bool colex_less(const std::vector<long long>& a, const std::vector<long long>& b) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// Householder QR of B (rows >= cols, full column rank). Produces the upper
// triangular factor with positive diagonal, the rotated target c = Q^T t
// (first cols entries) and the squared norm of the out-of-span residual.
struct QrData {
  int n = 0;
  std::vector<std::vector<double>> r;  // n x n upper triangular
  std::vector<double> c;               // length n
  double rho_sq = 0.0;                 // ||t||^2 - ||c||^2
};

QrData qr_with_target(const DenseMatrix& B, std::span<const double> t) {
  const int rows = B.rows;
  const int n = B.cols;
  if (rows < n) throw InputError("cvp: basis needs rows >= cols");
  if (static_cast<int>(t.size()) != rows) throw InputError("cvp: target dimension mismatch");

  std::vector<std::vector<double>> m(rows, std::vector<double>(n));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = B.at(i, j);
  std::vector<double> tv(t.begin(), t.end());

  std::vector<double> colnorm(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += m[i][j] * m[i][j];
    colnorm[j] = std::sqrt(s);
  }

  for (int k = 0; k < n; ++k) {
    double norm = 0.0;
    for (int i = k; i < rows; ++i) norm += m[i][k] * m[i][k];
    norm = std::sqrt(norm);
    if (norm <= 1e-10 * (1.0 + colnorm[k]))
      throw InputError("cvp: matrix does not have full column rank");

    const double alpha = m[k][k] >= 0 ? -norm : norm;
    std::vector<double> v(rows - k);
    for (int i = k; i < rows; ++i) v[i - k] = m[i][k];
    v[0] -= alpha;
    double vnorm_sq = 0.0;
    for (double x : v) vnorm_sq += x * x;
    if (vnorm_sq > 0) {
      auto reflect = [&](auto&& get, auto&& set) {
        double dot = 0.0;
        for (int i = k; i < rows; ++i) dot += v[i - k] * get(i);
        const double f = 2.0 * dot / vnorm_sq;
        for (int i = k; i < rows; ++i) set(i, get(i) - f * v[i - k]);
      };
      for (int j = k; j < n; ++j)
        reflect([&](int i) { return m[i][j]; }, [&](int i, double x) { m[i][j] = x; });
      reflect([&](int i) { return tv[i]; }, [&](int i, double x) { tv[i] = x; });
    }
    m[k][k] = alpha;
    for (int i = k + 1; i < rows; ++i) m[i][k] = 0.0;
  }

  QrData q;
  q.n = n;
  q.r.assign(n, std::vector<double>(n, 0.0));
  q.c.assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    const double sign = m[k][k] < 0 ? -1.0 : 1.0;
    for (int j = k; j < n; ++j) q.r[k][j] = sign * m[k][j];
    q.c[k] = sign * tv[k];
  }
  for (int i = n; i < rows; ++i) q.rho_sq += tv[i] * tv[i];
  if (q.rho_sq < 0) q.rho_sq = 0;
  return q;
}

std::vector<double> babai_solve(const QrData& q) {
  std::vector<double> w(q.n, 0.0);
  for (int k = q.n - 1; k >= 0; --k) {
    double u = q.c[k];
    for (int j = k + 1; j < q.n; ++j) u -= q.r[k][j] * w[j];
    w[k] = u / q.r[k][k];
  }
  return w;
}

double residual_dist(const DenseMatrix& B, std::span<const double> t,
                     const std::vector<long long>& x, PNorm p) {
  std::vector<double> xd(x.begin(), x.end());
  std::vector<double> bx = matvec(B, xd);
  for (int i = 0; i < B.rows; ++i) bx[i] -= t[i];
  return lp_norm(bx, p);
}

// Radius conversion: any v with ||v||_p <= r satisfies ||v||_2 <= conv * r.
double l2_conversion(PNorm p, int rows) {
  if (p.is_inf()) return std::sqrt(static_cast<double>(rows));
  if (p.value() <= 2.0) return 1.0;
  return std::pow(static_cast<double>(rows), 0.5 - 1.0 / p.value());
}

struct BestTracker {
  double dist = std::numeric_limits<double>::infinity();
  std::vector<long long> coeffs;

  void offer(double d, const std::vector<long long>& x) {
    if (d < dist) {
      dist = d;
      coeffs = x;
    } else if (d == dist && !coeffs.empty() && colex_less(x, coeffs)) {
      coeffs = x;
    }
  }
};

// Plain box enumeration through the triangular factor: depth-first over
// coordinates n-1..0 with interval bounds from the remaining l2 budget.
void enumerate_generic(const DenseMatrix& B, std::span<const double> t, PNorm p,
                       const QrData& q, double radius_p, BestTracker& best,
                       std::uint64_t node_cap) {
  const int n = q.n;
  const double conv = l2_conversion(p, B.rows);

  std::vector<long long> x(n, 0);
  std::vector<double> partial(n + 1, 0.0);  // partial[k] = sum of squared terms above level k
  std::uint64_t nodes = 0;

  auto budget2 = [&]() {
    const double rp = std::min(radius_p, best.dist);
    return conv * conv * rp * rp - q.rho_sq;
  };

  // Recursive lambda over levels; level n-1 is outermost so candidates are
  // visited in colex-ascending order.
  auto recurse = [&](auto&& self, int k) -> void {
    const double rem = budget2() - partial[k + 1] + kEps * (1.0 + budget2());
    if (rem < 0) return;
    double u = q.c[k];
    for (int j = k + 1; j < n; ++j) u -= q.r[k][j] * x[j];
    const double s = std::sqrt(std::max(rem, 0.0));
    const double lo_f = (u - s) / q.r[k][k];
    const double hi_f = (u + s) / q.r[k][k];
    const long long lo = static_cast<long long>(std::ceil(lo_f - 1e-9));
    const long long hi = static_cast<long long>(std::floor(hi_f + 1e-9));
    for (long long v = lo; v <= hi; ++v) {
      if (++nodes > node_cap)
        throw ResourceError("cvp_enumerate: node cap exceeded (cap " + std::to_string(node_cap) +
                            "); best distance so far " + std::to_string(best.dist));
      const double term = q.r[k][k] * v - u;
      partial[k] = partial[k + 1] + term * term;
      if (partial[k] > budget2() + kEps * (1.0 + budget2())) continue;
      x[k] = v;
      if (k == 0) {
        best.offer(residual_dist(B, t, x, p), x);
      } else {
        self(self, k - 1);
      }
    }
  };
  recurse(recurse, n - 1);
}

// Branch-and-bound specialized to reduction matrices: coordinate triples are
// enumerated against the gadget-block budget, and each incidence term is
// added once the last variable of its constraint is fixed.
void enumerate_structured(const AStructure& st, std::span<const double> w, PNorm p,
                          double radius_p, BestTracker& best, std::uint64_t node_cap) {
  const int n = st.n;
  const int m = st.m;
  const double pe = p.value();

  // Constraint i becomes evaluable at the largest of its variable indices.
  struct Term {
    std::vector<std::pair<int, int>> lits;  // (column j, sign)
  };
  std::vector<std::vector<Term>> ready(n);
  for (int i = 0; i < m; ++i) {
    Term term;
    int last = 0;
    for (int j = 0; j < n; ++j) {
      const double v = st.incidence.at(i, j);
      if (v != 0.0) {
        term.lits.emplace_back(j, v > 0 ? 1 : -1);
        last = std::max(last, j);
      }
    }
    ready[last].push_back(std::move(term));
  }

  std::vector<std::array<double, 3>> wj(n);
  std::vector<double> wsum(n);
  for (int j = 0; j < n; ++j) {
    wj[j] = {w[j], w[n + j], w[2 * n + j]};
    wsum[j] = wj[j][0] + wj[j][1] + wj[j][2];
  }

  std::vector<long long> x(3 * n, 0);
  std::vector<double> xsum(n, 0.0);
  std::uint64_t nodes = 0;

  auto budget_pow = [&]() {
    const double rp = std::min(radius_p, best.dist);
    return std::pow(rp, pe);
  };

  auto recurse = [&](auto&& self, int j, double acc) -> void {
    if (j == n) {
      // acc is the exact structured ||A(w - x)||_p^p of this assignment.
      best.offer(std::pow(acc, 1.0 / pe), x);
      return;
    }
    const double guard = kEps * (1.0 + budget_pow());
    const double rem = budget_pow() - acc;
    if (rem < -guard) return;
    const int deg = st.degree[j];
    // deg >= 1 here (checked by the caller); the box below is rigorous:
    // ||v||_inf <= ||G v||_inf <= ||G v||_p <= (rem/deg)^{1/p}.
    const double beta = std::pow(std::max(rem, 0.0) / deg, 1.0 / pe) + 1e-9;

    struct Cand {
      std::array<int, 3> z;
      double cost;
    };
    std::vector<Cand> cands;
    const std::array<double, 3>& u = wj[j];
    for (long long z0 = llceil(u[0] - beta); z0 <= llfloor(u[0] + beta); ++z0)
      for (long long z1 = llceil(u[1] - beta); z1 <= llfloor(u[1] + beta); ++z1)
        for (long long z2 = llceil(u[2] - beta); z2 <= llfloor(u[2] + beta); ++z2) {
          const std::array<double, 3> d = {u[0] - z0, u[1] - z1, u[2] - z2};
          const double cost = deg * gadget_norm_pow(d, p);
          if (cost <= rem + guard)
            cands.push_back({{static_cast<int>(z0), static_cast<int>(z1), static_cast<int>(z2)}, cost});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      return a.z < b.z;
    });

    for (const Cand& cand : cands) {
      if (++nodes > node_cap)
        throw ResourceError("cvp_enumerate: node cap exceeded (cap " + std::to_string(node_cap) +
                            "); best distance so far " + std::to_string(best.dist));
      double acc2 = acc + cand.cost;
      if (acc2 > budget_pow() + guard) continue;
      xsum[j] = cand.z[0] + cand.z[1] + cand.z[2];
      bool cut = false;
      for (const Term& term : ready[j]) {
        double dot = 0.0;
        for (const auto& [col, sign] : term.lits) dot += sign * (wsum[col] - xsum[col]);
        acc2 += std::pow(std::fabs(dot) / 3.0, pe);
        if (acc2 > budget_pow() + guard) {
          cut = true;
          break;
        }
      }
      if (cut) continue;
      x[j] = cand.z[0];
      x[n + j] = cand.z[1];
      x[2 * n + j] = cand.z[2];
      self(self, j + 1, acc2);
    }
  };
  recurse(recurse, 0, 0.0);
}

}  // namespace

CvpResult cvp_enumerate(const DenseMatrix& B, std::span<const double> t, PNorm p,
                        double initial_radius, const EnumOptions& opts) {
  if (initial_radius < 0) throw InputError("cvp_enumerate: negative initial radius");
  const QrData q = qr_with_target(B, t);

  // Babai seed: always feasible, guards against an optimistic initial radius.
  const std::vector<double> w = babai_solve(q);
  std::vector<long long> x0(B.cols);
  for (int j = 0; j < B.cols; ++j) x0[j] = std::llround(w[j]);
  BestTracker best;
  best.offer(residual_dist(B, t, x0, p), x0);

  const double radius = std::max(initial_radius, 0.0);

  bool structured = false;
  if (B.structure && !p.is_inf()) {
    const AStructure& st = *B.structure;
    structured = (3 * st.n == B.cols) && (st.m + 3 * st.n == B.rows) &&
                 std::all_of(st.degree.begin(), st.degree.end(), [](int d) { return d >= 1; }) &&
                 q.rho_sq <= 1e-12 * (1.0 + lp_norm_pow(t, PNorm(2.0)));
  }
  if (structured) {
    enumerate_structured(*B.structure, w, p, radius, best, opts.node_cap);
  } else {
    enumerate_generic(B, t, p, q, radius, best, opts.node_cap);
  }

  return {best.coeffs, best.dist, CoeffDomain::integer, radius};
}

CvpResult binary_cvp(const DenseMatrix& B, std::span<const double> t, PNorm p, int cols_cap) {
  const int n = B.cols;
  if (static_cast<int>(t.size()) != B.rows) throw InputError("binary_cvp: target dimension mismatch");
  if (n > cols_cap)
    throw ResourceError("binary_cvp: " + std::to_string(n) + " columns exceeds cap " +
                        std::to_string(cols_cap));

  // Gray-code walk over {0,1}^n; bit j of the mask is coefficient j, so
  // smaller masks are colex-smaller coefficient vectors.
  std::vector<double> r(t.begin(), t.end());
  for (double& v : r) v = -v;  // residual = B x - t, starting at x = 0

  const bool use_pow = !p.is_inf();
  const double pe = p.is_inf() ? 0.0 : p.value();
  std::vector<double> contrib(B.rows, 0.0);
  double total = 0.0;
  auto full_refresh = [&](std::uint64_t mask) {
    for (int i = 0; i < B.rows; ++i) {
      double s = -t[i];
      for (int j = 0; j < n; ++j)
        if (mask & (1ULL << j)) s += B.at(i, j);
      r[i] = s;
    }
    if (use_pow) {
      total = 0.0;
      for (int i = 0; i < B.rows; ++i) {
        contrib[i] = std::pow(std::fabs(r[i]), pe);
        total += contrib[i];
      }
    }
  };
  full_refresh(0);

  auto current_value = [&]() {
    if (!use_pow) {
      double mx = 0.0;
      for (double v : r) mx = std::max(mx, std::fabs(v));
      return mx;
    }
    return total;
  };

  double best_val = current_value();
  std::uint64_t best_mask = 0;

  const std::uint64_t count = 1ULL << n;
  std::uint64_t gray = 0;
  for (std::uint64_t c = 1; c < count; ++c) {
    const int bit = std::countr_zero(c);
    const std::uint64_t next_gray = c ^ (c >> 1);
    const double dir = (next_gray & (1ULL << bit)) ? 1.0 : -1.0;
    gray = next_gray;
    for (int i = 0; i < B.rows; ++i) {
      const double col = B.at(i, bit);
      if (col == 0.0) continue;
      if (use_pow) total -= contrib[i];
      r[i] += dir * col;
      if (use_pow) {
        contrib[i] = std::pow(std::fabs(r[i]), pe);
        total += contrib[i];
      }
    }
    if ((c & 0xFFF) == 0) full_refresh(gray);  // cap floating-point drift

    const double val = current_value();
    if (val < best_val || (val == best_val && gray < best_mask)) {
      best_val = val;
      best_mask = gray;
    }
  }

  std::vector<long long> coeffs(n);
  for (int j = 0; j < n; ++j) coeffs[j] = (best_mask >> j) & 1;
  // Report the distance recomputed from scratch, not the running value.
  const double dist = residual_dist(B, t, coeffs, p);
  return {coeffs, dist, CoeffDomain::binary, std::numeric_limits<double>::infinity()};
}

GridSearchResult lindisc_grid_lb(const DenseMatrix& B, PNorm p, int g, std::uint64_t grid_cap) {
  if (g < 1) throw InputError("lindisc_grid_lb: grid resolution must be >= 1");
  const int n = B.cols;
  const std::uint64_t per = static_cast<std::uint64_t>(g) + 1;
  double points = 1.0;
  for (int j = 0; j < n; ++j) points *= static_cast<double>(per);
  if (points > static_cast<double>(grid_cap))
    throw ResourceError("lindisc_grid_lb: grid of " + std::to_string(points) +
                        " points exceeds cap " + std::to_string(grid_cap));

  const std::uint64_t total = static_cast<std::uint64_t>(points);
  GridSearchResult out;
  out.witness.assign(n, 0.0);
  std::vector<double> w(n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (int j = 0; j < n; ++j) {
      w[j] = static_cast<double>(rest % per) / g;
      rest /= per;
    }
    const std::vector<double> bw = matvec(B, w);
    const double d = binary_cvp(B, bw, p).dist;
    if (d > out.value) {
      out.value = d;
      out.witness = w;
    }
  }
  return out;
}

MuBoundResult mu_lower_bound(const DenseMatrix& B, PNorm p,
                             const std::vector<std::vector<double>>& targets,
                             const EnumOptions& opts) {
  MuBoundResult out;
  out.value = 0.0;
  bool first = true;
  for (const auto& w : targets) {
    if (static_cast<int>(w.size()) != B.cols)
      throw InputError("mu_lower_bound: target has wrong dimension");
    for (double v : w)
      if (v < -1e-12 || v > 1.0 + 1e-12)
        throw InputError("mu_lower_bound: target outside [0,1]^n");
    const std::vector<double> t = matvec(B, w);

    std::vector<long long> x0(B.cols);
    for (int j = 0; j < B.cols; ++j) x0[j] = std::llround(w[j]);
    std::vector<double> diff(B.cols);
    for (int j = 0; j < B.cols; ++j) diff[j] = w[j] - static_cast<double>(x0[j]);
    const double initial = lp_norm(matvec(B, diff), p);

    const CvpResult r = cvp_enumerate(B, t, p, initial, opts);
    if (first || r.dist > out.value) {
      out.value = r.dist;
      out.witness = w;
      out.best = r;
      first = false;
    }
  }
  return out;
}

}  // namespace crplab
