#include "doctest.h"

#include <cmath>

#include "crplab/errors.hpp"
#include "crplab/gadget.hpp"
#include "crplab/prng.hpp"
#include "crplab/reduction.hpp"

using namespace crplab;

TEST_CASE("incidence matrix") {
  const Formula phi = parse_formula("nae 3 3 1\n1 -2 3\n");
  const DenseMatrix b = incidence_matrix(phi);
  REQUIRE(b.rows == 1);
  REQUIRE(b.cols == 3);
  CHECK(b.at(0, 0) == 1.0);
  CHECK(b.at(0, 1) == -1.0);
  CHECK(b.at(0, 2) == 1.0);

  Prng rng(1);
  const Formula rand = random_formula(5, 6, 3, rng);
  const DenseMatrix br = incidence_matrix(rand);
  for (int i = 0; i < br.rows; ++i) {
    double abs_sum = 0.0;
    for (int j = 0; j < br.cols; ++j) abs_sum += std::fabs(br.at(i, j));
    CHECK(abs_sum == 3.0);
  }
  const std::vector<int> deg = rand.degrees();
  for (int j = 0; j < br.cols; ++j) {
    int nonzeros = 0;
    for (int i = 0; i < br.rows; ++i)
      if (br.at(i, j) != 0.0) ++nonzeros;
    CHECK(nonzeros == deg[j]);
  }

  CHECK_THROWS_AS(incidence_matrix(parse_formula("nae 4 4 1\n1 2 3 4\n")), InputError);
}

TEST_CASE("degree matrix") {
  // All degrees one: identity for any p.
  const Formula all_one = parse_formula("nae 3 3 1\n1 2 3\n");
  const DenseMatrix d1 = degree_matrix(all_one, PNorm(3.0));
  for (int j = 0; j < 3; ++j) CHECK(d1.at(j, j) == doctest::Approx(1.0));

  // deg = (2, 8, ...) at p = 3: entries 2^{1/3} and 2.
  std::vector<Constraint> cs;
  // v1 twice, v2 eight times; pad with v3/v4 to keep arity 3 and distinctness.
  for (int i = 0; i < 8; ++i) {
    Constraint c;
    c.literals = {Literal{2, +1}, Literal{i < 2 ? 1 : 3, i % 2 ? -1 : +1}, Literal{4, +1}};
    if (i >= 2) c.literals[1].var = 3;
    cs.push_back(c);
  }
  const Formula skewed(4, cs);
  const std::vector<int> deg = skewed.degrees();
  REQUIRE(deg[0] == 2);
  REQUIRE(deg[1] == 8);
  const DenseMatrix d3 = degree_matrix(skewed, PNorm(3.0));
  CHECK(d3.at(0, 0) == doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-12));
  CHECK(d3.at(1, 1) == doctest::Approx(2.0).epsilon(1e-12));

  // p = inf: identity regardless of the degrees.
  const DenseMatrix dinf = degree_matrix(skewed, PNorm::inf());
  for (int j = 0; j < 4; ++j) CHECK(dinf.at(j, j) == 1.0);
}

TEST_CASE("build_A block layout") {
  const Formula phi = parse_formula("nae 3 3 1\n1 -2 3\n");
  const DenseMatrix a = build_A(phi, PNorm(2.0));
  REQUIRE(a.rows == 10);
  REQUIRE(a.cols == 9);

  // Top row: (1/3)B repeated three times.
  for (int g = 0; g < 3; ++g) {
    CHECK(a.at(0, 3 * g + 0) == doctest::Approx(1.0 / 3.0));
    CHECK(a.at(0, 3 * g + 1) == doctest::Approx(-1.0 / 3.0));
    CHECK(a.at(0, 3 * g + 2) == doctest::Approx(1.0 / 3.0));
  }

  // A(x,x,x) reproduces Bx on the top block (the thirds cancel).
  Prng rng(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(3), xxx(9);
    for (int j = 0; j < 3; ++j) {
      x[j] = 2.0 * rng.uniform01() - 1.0;
      xxx[j] = xxx[3 + j] = xxx[6 + j] = x[j];
    }
    const std::vector<double> ax = matvec(a, xxx);
    const std::vector<double> bx = matvec(incidence_matrix(phi), x);
    CHECK(ax[0] == doctest::Approx(bx[0]).epsilon(1e-12));
  }
}

TEST_CASE("structured and dense norms agree on random vectors") {
  Prng rng(8);
  for (int t = 0; t < 1000; ++t) {
    const int n = static_cast<int>(rng.uniform_int(3, 5));
    const int m = static_cast<int>(rng.uniform_int(1, 6));
    const Formula phi = random_formula(n, m, 3, rng);
    const double pe = (t % 2 == 0) ? 2.0 : 3.5;
    const DenseMatrix a = build_A(phi, PNorm(pe));
    std::vector<double> y(3 * n);
    for (double& yi : y) yi = 4.0 * rng.uniform01() - 2.0;
    const double dense = lp_norm_pow(matvec(a, y), PNorm(pe));
    const double structured = structured_norm_pow(*a.structure, y, PNorm(pe));
    CHECK(dense == doctest::Approx(structured).epsilon(1e-9));
  }
}

TEST_CASE("A_inf equals A_p with the degree matrix replaced by the identity") {
  Prng rng(14);
  const Formula phi = random_formula(4, 5, 3, rng);
  const DenseMatrix a_inf = build_A(phi, PNorm::inf());
  // Rebuild by hand with D = I.
  const DenseMatrix b = incidence_matrix(phi);
  const int n = phi.n();
  const int m = phi.m();
  for (int i = 0; i < m; ++i)
    for (int g = 0; g < 3; ++g)
      for (int j = 0; j < n; ++j)
        CHECK(a_inf.at(i, g * n + j) == doctest::Approx(b.at(i, j) / 3.0));
  const DenseMatrix gmat = gadget_matrix();
  for (int rb = 0; rb < 3; ++rb)
    for (int j = 0; j < n; ++j)
      for (int cb = 0; cb < 3; ++cb)
        CHECK(a_inf.at(m + rb * n + j, cb * n + j) == doctest::Approx(gmat.at(rb, cb)));
}

TEST_CASE("threshold_r") {
  CHECK(threshold_r(1, 1.0, PNorm(1.0)) == doctest::Approx(34.0 / 3.0).epsilon(1e-12));
  // (4/3)^2 + 3*(2 + (4/3)^2) = 16/9 + 102/9 = 118/9.
  CHECK(threshold_r(1, 1.0, PNorm(2.0)) == doctest::Approx(std::sqrt(118.0 / 9.0)).epsilon(1e-12));

  // Homogeneity r(m) = m^{1/p} r(1).
  for (double pe : {1.0, 2.0, 5.0})
    for (int m : {2, 7})
      CHECK(threshold_r(m, 0.5, PNorm(pe)) ==
            doctest::Approx(std::pow(m, 1.0 / pe) * threshold_r(1, 0.5, PNorm(pe))).epsilon(1e-12));

  CHECK_THROWS_AS(threshold_r(1, 1.0, PNorm::inf()), InputError);
  CHECK_THROWS_AS(threshold_r(0, 1.0, PNorm(2.0)), InputError);
  CHECK_THROWS_AS(threshold_r(1, 1.5, PNorm(2.0)), InputError);
}

TEST_CASE("A' dimensions and block identity") {
  const Formula phi = parse_formula("ae-nae 3 1 2 1\n1 2 3\n");
  const ReductionInstance inst = build_A_prime(phi);
  CHECK(inst.matrix.rows == 12);  // m + 3n + 2n' = 1 + 9 + 2
  CHECK(inst.matrix.cols == 10);  // 3n + n'
  CHECK(inst.threshold == doctest::Approx(4.0 / 3.0));
  CHECK(inst.gamma == doctest::Approx(9.0 / 8.0));

  const std::vector<double> zero(10, 0.0);
  CHECK(lp_norm(matvec(inst.matrix, zero), PNorm::inf()) == 0.0);

  // ||A' y'||_inf equals the max of the block expressions.
  Prng rng(23);
  const int n = phi.n();
  const int nu = phi.universal_count();
  const DenseMatrix a_inf = build_A(phi, PNorm::inf());
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> y(3 * n + nu);
    for (double& yi : y) yi = 4.0 * rng.uniform01() - 2.0;
    const double dense = lp_norm_pow(matvec(inst.matrix, y), PNorm::inf());
    double expect =
        structured_norm_pow(*a_inf.structure, std::span<const double>(y.data(), 3 * n), PNorm::inf());
    for (int i = 0; i < nu; ++i) {
      const double ysum = y[i] + y[n + i] + y[2 * n + i];
      expect = std::max(expect, std::fabs((2.0 / 3.0) * ysum - 2.0 * y[3 * n + i]));
      expect = std::max(expect, (8.0 / 3.0) * std::fabs(y[3 * n + i]));
    }
    CHECK(dense == doctest::Approx(expect).epsilon(1e-9));
  }

  CHECK_THROWS_AS(build_A_prime(parse_formula("nae 3 3 1\n1 2 3\n")), InputError);
  CHECK_THROWS_AS(build_A_prime(parse_formula("ae-nae 3 0 3 1\n1 2 3\n")), InputError);
}

TEST_CASE("special targets") {
  const Formula phi = parse_formula("ae-nae 3 1 2 1\n1 2 3\n");
  const auto targets = special_targets(phi);
  REQUIRE(targets.size() == 2);
  for (const auto& w : targets) {
    REQUIRE(w.size() == 10);
    for (int c = 0; c < 9; ++c) CHECK(w[c] == 0.5);
  }
  CHECK(targets[0][9] == doctest::Approx(1.0 / 3.0));  // universal value 0
  CHECK(targets[1][9] == doctest::Approx(2.0 / 3.0));  // universal value 1

  CHECK_THROWS_AS(special_targets(parse_formula("ae-nae 3 0 3 1\n1 2 3\n")), InputError);

  // The trailing block rounds uniquely: the only integer within 9/16.
  for (double wstar : {1.0 / 3.0, 2.0 / 3.0}) {
    int count = 0, the_int = -99;
    for (int x = -3; x <= 4; ++x)
      if (std::fabs(wstar - x) < 9.0 / 16.0) {
        ++count;
        the_int = x;
      }
    CHECK(count == 1);
    CHECK(the_int == (wstar < 0.5 ? 0 : 1));
  }
}

TEST_CASE("gamma formulas agree and have the right shape") {
  // Closed form vs. the delta/eps form at delta = 15/16, eps = 1.
  for (double p : {1.0, 2.0, 5.0, 10.0, 50.0}) {
    const double a = np_hardness_factor(p);
    const double b = np_hardness_factor_closed_form(p);
    CHECK(std::fabs(a - b) <= 1e-12 * std::max(a, b));
  }

  CHECK(np_hardness_factor(1.0) == doctest::Approx(243.0 / 544.0).epsilon(1e-12));
  CHECK(std::fabs(np_hardness_factor(1e4) - 1.125) < 1e-3);
  CHECK(np_hardness_factor(30.0) < 1.0);
  CHECK(np_hardness_factor(40.0) > 1.0);

  // A harder soundness level (smaller delta) and a cleaner completeness
  // level (larger eps) both enlarge the gap: gamma is strictly decreasing
  // in delta and strictly increasing in eps.
  for (double p : {1.0, 3.0, 20.0}) {
    double prev = 1e18;
    for (double delta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double g = gamma_factor(delta, 1.0, p);
      CHECK(g < prev);
      prev = g;
    }
    double prev_eps = 0.0;
    for (double eps : {0.2, 0.4, 0.6, 0.8, 1.0}) {
      const double g = gamma_factor(0.1, eps, p);
      CHECK(g > prev_eps);
      prev_eps = g;
    }
  }

  CHECK_THROWS_AS(gamma_factor(0.0, 1.0, 2.0), InputError);
  CHECK_THROWS_AS(gamma_factor(0.5, 0.4, 2.0), InputError);
}

TEST_CASE("gamma matches plain-arithmetic evaluation at moderate exponents") {
  // Third route: the ratio evaluated directly in double arithmetic, safe up
  // to a few hundred in the exponent. Guards the log-space implementation.
  for (double p : {1.0, 2.0, 3.7, 10.0, 50.0, 300.0}) {
    const double num = 0.9375 * 10.0 * std::pow(0.5, p) +
                       0.0625 * (std::pow(1.5, p) + 9.0 * std::pow(0.5, p));
    const double den = std::pow(4.0 / 3.0, p) + 3.0 * (2.0 + std::pow(4.0 / 3.0, p));
    const double direct = std::pow(num / den, 1.0 / p);
    CHECK(np_hardness_factor(p) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("gamma crosses 1 exactly once on [1, 100]") {
  int sign_changes = 0;
  double prev = np_hardness_factor(1.0) - 1.0;
  for (int k = 1; k <= 2000; ++k) {
    const double p = 1.0 + 99.0 * k / 2000.0;
    const double cur = np_hardness_factor(p) - 1.0;
    if ((prev < 0) != (cur < 0)) ++sign_changes;
    prev = cur;
  }
  CHECK(sign_changes == 1);
}

TEST_CASE("p0 bisection") {
  const double p0 = find_p0(1e-6);
  CHECK(std::fabs(p0 - 35.310188) <= 1e-4);
  CHECK_THROWS_AS(find_p0(0.0), InputError);
}

TEST_CASE("gamma curve CSV") {
  const std::string csv = gamma_curve_csv(1.0, 10000.0, 200);
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 201);  // header + 200 samples
  CHECK(csv.substr(0, 8) == "p,gamma\n");

  // Last row is the asymptote sample.
  const std::size_t last_comma = csv.rfind(',');
  const double last = std::stod(csv.substr(last_comma + 1));
  CHECK(std::fabs(last - 1.125) < 1e-3);
}

TEST_CASE("np instance carries a clamped hardness factor") {
  const Formula phi = parse_formula("nae 3 3 1\n1 2 3\n");
  const ReductionInstance low_p = make_np_instance(phi, PNorm(2.0), 1.0);
  CHECK(low_p.gamma == 1.0);  // below the crossover there is no certified gap
  CHECK(low_p.threshold == doctest::Approx(threshold_r(1, 1.0, PNorm(2.0))));

  const ReductionInstance high_p = make_np_instance(phi, PNorm(50.0), 1.0);
  CHECK(high_p.gamma > 1.0);
  CHECK(high_p.gamma == doctest::Approx(np_hardness_factor(50.0)).epsilon(1e-12));
}
