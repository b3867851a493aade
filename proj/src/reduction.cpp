#include "crplab/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "crplab/errors.hpp"
#include "crplab/gadget.hpp"

namespace crplab {

namespace {

// log(sum exp(terms)), skipping -inf entries.
double logsumexp(const std::vector<double>& terms) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double t : terms) mx = std::max(mx, t);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double t : terms)
    if (std::isfinite(t)) s += std::exp(t - mx);
  return mx + std::log(s);
}

}  // namespace

DenseMatrix incidence_matrix(const Formula& phi) {
  if (!phi.is_exactly_k(3)) throw InputError("incidence_matrix: formula must be NAE-E3");
  DenseMatrix b(phi.m(), phi.n());
  for (int i = 0; i < phi.m(); ++i)
    for (const Literal& l : phi.constraints()[i].literals) b.at(i, l.var - 1) = l.sign;
  return b;
}

DenseMatrix degree_matrix(const Formula& phi, PNorm p) {
  const std::vector<int> deg = phi.degrees();
  DenseMatrix d(phi.n(), phi.n());
  for (int j = 0; j < phi.n(); ++j)
    d.at(j, j) = p.is_inf() ? 1.0 : std::pow(static_cast<double>(deg[j]), 1.0 / p.value());
  return d;
}

DenseMatrix build_A(const Formula& phi, PNorm p) {
  const int n = phi.n();
  const int m = phi.m();
  const DenseMatrix b = incidence_matrix(phi);
  const DenseMatrix d = degree_matrix(phi, p);
  const DenseMatrix g = gadget_matrix();

  DenseMatrix a(m + 3 * n, 3 * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = b.at(i, j) / 3.0;
      a.at(i, j) = v;
      a.at(i, n + j) = v;
      a.at(i, 2 * n + j) = v;
    }
  // Kronecker block: row (row_block, j) has G[row_block][col_block] * D[j][j]
  // in column col_block * n + j.
  for (int rb = 0; rb < 3; ++rb)
    for (int j = 0; j < n; ++j)
      for (int cb = 0; cb < 3; ++cb)
        a.at(m + rb * n + j, cb * n + j) = g.at(rb, cb) * d.at(j, j);

  auto st = std::make_shared<AStructure>();
  st->m = m;
  st->n = n;
  st->incidence = b;
  st->degree = phi.degrees();
  a.structure = std::move(st);
  return a;
}

double threshold_r(int m, double eps, PNorm p) {
  if (p.is_inf())
    throw InputError("threshold_r: defined for finite p only (the NP pipeline)");
  if (m < 1) throw InputError("threshold_r: need m >= 1");
  if (eps < 0.0 || eps > 1.0) throw InputError("threshold_r: eps must lie in [0,1]");
  const double pe = p.value();
  const double fourthird = std::pow(4.0 / 3.0, pe);
  const double val = eps * m * fourthird + (1.0 - eps) * m * std::pow(2.0, pe) +
                     3.0 * m * (2.0 + fourthird);
  return std::pow(val, 1.0 / pe);
}

ReductionInstance make_np_instance(const Formula& phi, PNorm p, double eps) {
  ReductionInstance inst;
  inst.matrix = build_A(phi, p);
  inst.threshold = threshold_r(phi.m(), eps, p);
  inst.p = p;
  // The certified gap at the canonical soundness level 15/16; degenerate
  // (clamped to 1) below the crossover or when eps < 15/16.
  inst.gamma =
      eps >= 15.0 / 16.0 ? std::max(1.0, gamma_factor(15.0 / 16.0, eps, p.value())) : 1.0;
  inst.source = phi;
  return inst;
}

ReductionInstance build_A_prime(const Formula& phi) {
  if (!phi.quantified() || phi.universal_count() < 1)
    throw InputError("build_A_prime: formula needs at least one universal variable");
  const int n = phi.n();
  const int nu = phi.universal_count();
  const int m = phi.m();

  const DenseMatrix a_inf = build_A(phi, PNorm::inf());
  DenseMatrix ap(m + 3 * n + 2 * nu, 3 * n + nu);
  for (int i = 0; i < a_inf.rows; ++i)
    for (int j = 0; j < a_inf.cols; ++j) ap.at(i, j) = a_inf.at(i, j);
  for (int i = 0; i < nu; ++i) {
    const int row = m + 3 * n + i;
    ap.at(row, i) = 2.0 / 3.0;
    ap.at(row, n + i) = 2.0 / 3.0;
    ap.at(row, 2 * n + i) = 2.0 / 3.0;
    ap.at(row, 3 * n + i) = -2.0;
    ap.at(row + nu, 3 * n + i) = 8.0 / 3.0;
  }

  ReductionInstance inst;
  inst.matrix = std::move(ap);
  inst.threshold = 4.0 / 3.0;
  inst.p = PNorm::inf();
  inst.gamma = 9.0 / 8.0;
  inst.source = phi;
  return inst;
}

std::vector<std::vector<double>> special_targets(const Formula& phi) {
  if (!phi.quantified() || phi.universal_count() < 1)
    throw InputError("special_targets: formula needs at least one universal variable");
  const int nu = phi.universal_count();
  if (nu > 20) throw ResourceError("special_targets: 2^" + std::to_string(nu) + " targets exceeds cap");
  const int n = phi.n();

  std::vector<std::vector<double>> targets;
  targets.reserve(1ULL << nu);
  for (std::uint64_t ub = 0; ub < (1ULL << nu); ++ub) {
    std::vector<double> w(3 * n + nu, 0.5);
    for (int i = 0; i < nu; ++i) {
      const int bit = static_cast<int>((ub >> (nu - 1 - i)) & 1);  // value of universal v_{i+1}
      w[3 * n + i] = bit == 0 ? 1.0 / 3.0 : 2.0 / 3.0;
    }
    targets.push_back(std::move(w));
  }
  return targets;
}

double gamma_factor(double delta, double eps, double p) {
  if (!(delta > 0.0) || !(delta <= eps) || !(eps <= 1.0))
    throw InputError("gamma_factor: need 0 < delta <= eps <= 1");
  if (!(p >= 1.0) || std::isinf(p)) throw InputError("gamma_factor: need finite p >= 1");

  const double log2 = std::log(2.0);
  std::vector<double> num;
  if (delta > 0.0) num.push_back(std::log(10.0 * delta) - p * log2);
  if (delta < 1.0) {
    num.push_back(std::log1p(-delta) + p * std::log(1.5));
    num.push_back(std::log(9.0) + std::log1p(-delta) - p * log2);
  }
  std::vector<double> den;
  if (eps > 0.0) den.push_back(std::log(eps) + p * std::log(4.0 / 3.0));
  if (eps < 1.0) den.push_back(std::log1p(-eps) + p * log2);
  den.push_back(std::log(6.0));
  den.push_back(std::log(3.0) + p * std::log(4.0 / 3.0));

  return std::exp((logsumexp(num) - logsumexp(den)) / p);
}

double np_hardness_factor(double p) { return gamma_factor(15.0 / 16.0, 1.0, p); }

double np_hardness_factor_closed_form(double p) {
  const std::vector<double> num = {p * std::log(9.0), std::log(159.0) + p * std::log(3.0)};
  const std::vector<double> den = {(p + 2.0) * std::log(8.0), std::log(96.0) + p * std::log(6.0)};
  return std::exp((logsumexp(num) - logsumexp(den)) / p);
}

double find_p0(double tol) {
  if (!(tol > 0.0)) throw InputError("find_p0: tolerance must be positive");
  double lo = 1.0;
  double hi = 100.0;
  if (np_hardness_factor(lo) >= 1.0 || np_hardness_factor(hi) <= 1.0)
    throw InputError("find_p0: root not bracketed on [1, 100]");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (np_hardness_factor(mid) < 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::string gamma_curve_csv(double pmin, double pmax, int steps) {
  if (!(pmin >= 1.0)) throw InputError("gamma_curve_csv: pmin must be >= 1");
  if (!(pmax >= pmin)) throw InputError("gamma_curve_csv: pmax must be >= pmin");
  if (steps < 2) throw InputError("gamma_curve_csv: need at least 2 steps");

  std::string out = "p,gamma\n";
  char buf[96];
  const double ratio = std::log(pmax / pmin);
  for (int k = 0; k < steps; ++k) {
    const double p = pmin * std::exp(ratio * k / (steps - 1));
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", p, np_hardness_factor(p));
    out += buf;
  }
  return out;
}

void write_instance(const ReductionInstance& inst, const std::string& prefix) {
  {
    std::ofstream mat(prefix + ".mat");
    if (!mat) throw InputError("write_instance: cannot open " + prefix + ".mat");
    mat << serialize_matrix(inst.matrix);
  }
  nlohmann::json header;
  header["m"] = inst.source.m();
  header["n"] = inst.source.n();
  header["n_prime"] = inst.source.quantified() ? inst.source.universal_count() : 0;
  if (inst.p.is_inf())
    header["p"] = "inf";
  else
    header["p"] = inst.p.value();
  header["r"] = inst.threshold;
  header["gamma"] = inst.gamma;
  header["degrees"] = inst.source.degrees();
  std::ofstream js(prefix + ".json");
  if (!js) throw InputError("write_instance: cannot open " + prefix + ".json");
  js << header.dump(2) << "\n";
}

}  // namespace crplab
