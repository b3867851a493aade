#include "doctest.h"

#include <cmath>

#include "crplab/errors.hpp"
#include "crplab/gadget.hpp"
#include "crplab/prng.hpp"
#include "crplab/verifier.hpp"

using namespace crplab;

TEST_CASE("structural identity on zero and random vectors") {
  const Formula phi = parse_formula("nae 3 3 1\n1 -2 3\n");
  const std::vector<double> zero(9, 0.0);
  const IdentityCheck at_zero = check_structural_identity(phi, PNorm(2.0), zero);
  CHECK(at_zero.dense_pow == 0.0);
  CHECK(at_zero.structured_pow == 0.0);
  CHECK(at_zero.block_ok);
  CHECK(at_zero.regroup_ok);

  Prng rng(2);
  for (int t = 0; t < 300; ++t) {
    const Formula f = random_formula(4, 5, 3, rng);
    std::vector<double> y(12);
    for (double& yi : y) yi = 4.0 * rng.uniform01() - 2.0;
    const IdentityCheck chk = check_structural_identity(f, PNorm(2.0), y);
    CHECK(chk.block_ok);
    CHECK(chk.regroup_ok);
  }

  CHECK_THROWS_AS(check_structural_identity(phi, PNorm::inf(), zero), InputError);
}

TEST_CASE("per-constraint values at binary x match the two-case table") {
  Prng rng(6);
  for (int t = 0; t < 100; ++t) {
    const int n = 4;
    const Formula phi = random_formula(n, 4, 3, rng);
    const double pe = (t % 2) ? 1.0 : 2.0;
    std::vector<long long> x(3 * n);
    for (int j = 0; j < n; ++j) {
      const long long b = rng.coin() ? 1 : 0;
      x[j] = x[n + j] = x[2 * n + j] = b;
    }
    // Every per-constraint term of ||A(1/2*1-x)||_p^p is 10/2^p or (9+3^p)/2^p;
    // the total is their sum.
    const Rational total = exact_center_norm_pow(phi, static_cast<int>(pe), x);
    Assignment psi(n);
    for (int j = 0; j < n; ++j) psi[j] = static_cast<std::uint8_t>(x[j]);
    const ExtractionResult ex = extract_assignment(psi, phi);
    const long long mixed = ex.sgndiff_fraction.num() * (phi.m() / ex.sgndiff_fraction.den());
    const Rational low = pe == 1.0 ? Rational(10, 2) : Rational(10, 4);
    const Rational high = pe == 1.0 ? Rational(12, 2) : Rational(18, 4);
    const Rational expect = Rational(mixed) * low + Rational(phi.m() - mixed) * high;
    CHECK(total == expect);
  }
}

TEST_CASE("completeness construction stays within the bound") {
  Prng rng(10);
  for (int t = 0; t < 100; ++t) {
    const PlantedFormula pf = planted_formula(static_cast<int>(rng.uniform_int(3, 5)),
                                              static_cast<int>(rng.uniform_int(1, 6)), 3, rng);
    const PNorm p(t % 2 ? 1.0 : 2.0);
    const int n3 = 3 * pf.formula.n();
    const std::vector<double> centre(n3, 0.5);
    const CompletenessCheck cc = check_completeness(pf.formula, pf.planted, p, centre);
    CHECK(cc.eps == Rational(1));
    CHECK(cc.total_ok);
    CHECK(cc.per_constraint_ok);

    std::vector<double> w(n3);
    for (double& wi : w) wi = static_cast<double>(rng.uniform_int(0, 6)) / 6.0;
    const CompletenessCheck grid = check_completeness(pf.formula, pf.planted, p, w);
    CHECK(grid.total_ok);
    CHECK(grid.per_constraint_ok);
  }
}

TEST_CASE("completeness with a binary w reproduces a binary candidate") {
  const Formula phi = parse_formula("nae 3 3 2\n1 2 3\n-1 -2 3\n");
  const Assignment psi = {1, 0, 0};
  std::vector<double> w(9);
  Prng rng(19);
  for (double& wi : w) wi = rng.coin() ? 1.0 : 0.0;
  const CompletenessCheck cc = check_completeness(phi, psi, PNorm(2.0), w);
  CHECK(cc.total_ok);  // binary w admits x = w among the candidates when slack allows
}

TEST_CASE("rounding picks the prescribed binary vector and never loses") {
  // y_sum = (0, 3, 1) => x' = (0, 1, 0).
  const Formula phi = parse_formula("nae 3 3 1\n1 2 3\n");
  const std::vector<long long> y = {0, 1, 0, 0, 1, 1, 0, 1, 0};  // column sums (0,3,1)
  const RoundingCheck rc = round_coefficients(y, phi, PNorm(2.0));
  CHECK(rc.x == std::vector<long long>{0, 1, 0, 0, 1, 0, 0, 1, 0});
  CHECK(rc.dominated);

  // Binary y of the replicated form is a fixed point.
  const std::vector<long long> fixed = {1, 0, 1, 1, 0, 1, 1, 0, 1};
  const RoundingCheck rc2 = round_coefficients(fixed, phi, PNorm(2.0));
  CHECK(rc2.x == fixed);
  CHECK(rc2.lhs_pow == doctest::Approx(rc2.rhs_pow).epsilon(1e-12));

  Prng rng(31);
  for (int t = 0; t < 2000; ++t) {
    const int n = static_cast<int>(rng.uniform_int(3, 5));
    const Formula f = random_formula(n, static_cast<int>(rng.uniform_int(1, 6)), 3, rng);
    std::vector<long long> yr(3 * n);
    for (auto& yi : yr) yi = rng.uniform_int(-2, 3);
    const PNorm p(t % 2 ? 1.0 : 2.0);
    CHECK(round_coefficients(yr, f, p).dominated);
  }
}

TEST_CASE("extraction counts mixed-sign rows") {
  // All-positive formula at x' = 0: no row is mixed, no claim made.
  const Formula pos = parse_formula("nae 3 3 2\n1 2 3\n1 2 3\n");
  const ExtractionResult none = extract_assignment({0, 0, 0}, pos);
  CHECK(none.sgndiff_fraction == Rational(0));
  CHECK(none.sgndiff_rows_satisfied);

  // A satisfying x' makes its satisfied rows mixed.
  const Formula phi = parse_formula("nae 3 3 2\n1 2 3\n-1 -2 3\n");
  const ExtractionResult ex = extract_assignment({1, 0, 0}, phi);
  CHECK(ex.satisfied_fraction == Rational(1));
  CHECK(ex.sgndiff_fraction == Rational(1));
  CHECK(ex.sgndiff_rows_satisfied);

  Prng rng(41);
  for (int t = 0; t < 300; ++t) {
    const Formula f = random_formula(4, 5, 3, rng);
    Assignment xp(4);
    for (auto& b : xp) b = rng.coin() ? 1 : 0;
    const ExtractionResult r = extract_assignment(xp, f);
    CHECK(r.sgndiff_rows_satisfied);  // mixed-sign rows are exactly the satisfied rows
    CHECK(r.sgndiff_fraction <= r.satisfied_fraction);
    CHECK(r.satisfied_fraction <= brute_force_value(f).value);
  }
}

TEST_CASE("exact centre norm agrees with the floating evaluation") {
  Prng rng(51);
  for (int t = 0; t < 500; ++t) {
    const int n = static_cast<int>(rng.uniform_int(3, 5));
    const Formula phi = random_formula(n, static_cast<int>(rng.uniform_int(1, 6)), 3, rng);
    std::vector<long long> x(3 * n);
    for (auto& xi : x) xi = rng.uniform_int(-2, 3);
    for (int p : {1, 2}) {
      const Rational exact = exact_center_norm_pow(phi, p, x);
      const DenseMatrix a = build_A(phi, PNorm(static_cast<double>(p)));
      std::vector<double> y(3 * n);
      for (int c = 0; c < 3 * n; ++c) y[c] = 0.5 - static_cast<double>(x[c]);
      const double dbl = structured_norm_pow(*a.structure, y, PNorm(static_cast<double>(p)));
      CHECK(exact.to_double() == doctest::Approx(dbl).epsilon(1e-9));
    }
  }
}

TEST_CASE("soundness bound endpoints") {
  // delta = 1: m * 10/2^p; delta = 0: m * (9/2^p + (3/2)^p).
  CHECK(soundness_bound_pow(3, Rational(1), 1) == Rational(15));        // 3 * 5
  CHECK(soundness_bound_pow(3, Rational(0), 1) == Rational(18));        // 3 * 6
  CHECK(soundness_bound_pow(2, Rational(1), 2) == Rational(5));         // 2 * 5/2
  CHECK(soundness_bound_pow(2, Rational(0), 2) == Rational(9));         // 2 * 9/2
  CHECK(soundness_bound_pow(4, Rational(1, 2), 2) == Rational(14));     // 4 * (5/4 + 9/4)
}

TEST_CASE("np certification passes on planted and on adversarial formulas") {
  Prng rng(61);
  for (int t = 0; t < 4; ++t) {
    const PlantedFormula pf = planted_formula(3, 2, 3, rng);
    for (double pe : {1.0, 2.0}) {
      const VerificationReport rep = certify_np_instance(pf.formula, PNorm(pe));
      CHECK(rep.failures == 0);
      CHECK(rep.inconclusive == 0);
    }
  }
  // An unsatisfiable-at-1 formula: both all-equal sign rows on 3 variables.
  const Formula hard = parse_formula("nae 3 3 2\n1 2 3\n-1 -2 -3\n");
  for (double pe : {1.0, 2.0}) {
    const VerificationReport rep = certify_np_instance(hard, PNorm(pe));
    CHECK(rep.failures == 0);
  }
  CHECK_THROWS_AS(certify_np_instance(parse_formula("nae 3 3 1\n1 2 3\n"), PNorm::inf()),
                  InputError);
}

TEST_CASE("np certification at the larger desk-scale sizes") {
  Prng rng(123);
  const PlantedFormula pf = planted_formula(6, 8, 3, rng);
  for (double pe : {1.0, 2.0}) {
    NpCertifyOptions opts;
    opts.cross_check_box = false;
    const VerificationReport rep = certify_np_instance(pf.formula, PNorm(pe), opts);
    CHECK(rep.failures == 0);
    CHECK(rep.inconclusive == 0);
  }
  CHECK_THROWS_AS(certify_np_instance(planted_formula(9, 3, 3, rng).formula, PNorm(2.0)),
                  InputError);  // beyond the caps
}

TEST_CASE("pi2 certification matches the forall/exists ground truth") {
  const std::vector<Formula> instances = bundled_pi2_instances();
  REQUIRE(instances.size() >= 6);
  bool saw_yes = false, saw_no = false;
  for (const Formula& phi : instances) {
    const VerificationReport rep = certify_pi2_instance(phi);
    CHECK(rep.failures == 0);
    (brute_force_pi2(phi) ? saw_yes : saw_no) = true;
  }
  CHECK(saw_yes);
  CHECK(saw_no);
}

TEST_CASE("pi2 target analysis on a YES and a NO instance") {
  const Formula yes = parse_formula("ae-nae 3 1 2 1\n1 2 3\n");
  REQUIRE(brute_force_pi2(yes));
  for (std::size_t ti = 0; ti < 2; ++ti) {
    const Pi2TargetAnalysis ana = analyze_pi2_target(yes, ti);
    CHECK(ana.binary_min_scaled <= 192);  // lindisc_inf(A') <= 4/3 at the special targets
    CHECK_FALSE(ana.integer_min_exceeds_radius);
    CHECK(ana.integer_min_scaled < 216);
    CHECK(ana.integer_min_scaled <= ana.binary_min_scaled);
    CHECK(ana.near_vectors_all_binary);
  }

  const Formula no = parse_formula("ae-nae 3 2 1 2\n1 2 3\n-1 -2 3\n");
  REQUIRE_FALSE(brute_force_pi2(no));
  bool some_far_target = false;
  for (std::size_t ti = 0; ti < 4; ++ti) {
    const Pi2TargetAnalysis ana = analyze_pi2_target(no, ti);
    CHECK(ana.near_vectors_all_binary);
    if (ana.integer_min_exceeds_radius || ana.integer_min_scaled >= 216) some_far_target = true;
  }
  CHECK(some_far_target);
}

TEST_CASE("the canonical sign-pattern formulas have value exactly 3/4") {
  // Under any assignment exactly one of the four canonical patterns (first
  // sign positive) is all-equal, and exactly one complementary pair of all
  // eight; both formulas sit at value 3/4 under every assignment.
  std::vector<Constraint> canon;
  for (int s1 : {+1, -1})
    for (int s2 : {+1, -1})
      for (int s3 : {+1, -1})
        canon.push_back(Constraint{{Literal{1, s1}, Literal{2, s2}, Literal{3, s3}}});
  const Formula quarter(3, std::vector<Constraint>(canon.begin(), canon.begin() + 4));
  const Formula eighth(3, canon);
  CHECK(brute_force_value(quarter).value == Rational(3, 4));
  CHECK(brute_force_value(eighth).value == Rational(3, 4));
  for (int mask = 0; mask < 8; ++mask) {
    const Assignment a = {static_cast<std::uint8_t>(mask & 1), static_cast<std::uint8_t>((mask >> 1) & 1),
                          static_cast<std::uint8_t>((mask >> 2) & 1)};
    CHECK(formula_value(quarter, a) == Rational(3, 4));
    CHECK(formula_value(eighth, a) == Rational(3, 4));
  }
}

TEST_CASE("np certification handles value-3/4 instances") {
  std::vector<Constraint> canon;
  for (int s2 : {+1, -1})
    for (int s3 : {+1, -1})
      canon.push_back(Constraint{{Literal{1, +1}, Literal{2, s2}, Literal{3, s3}}});
  const Formula quarter(3, canon);
  for (double pe : {1.0, 2.0}) {
    const VerificationReport rep = certify_np_instance(quarter, PNorm(pe));
    CHECK(rep.failures == 0);
    CHECK(rep.inconclusive == 0);
  }
  // The distance certificate separates levels: above value 3/4 the bound
  // must be violated, otherwise the sweep itself would have failed.
  const std::vector<long long> dummy(9, 0);
  const Rational d1 = exact_center_norm_pow(quarter, 1, dummy);
  CHECK(d1 > soundness_bound_pow(4, Rational(1), 1));  // x = 0 is no witness for value 1
}

TEST_CASE("independent evaluators disagree under deliberate corruption") {
  // The block/dense agreement is a real two-route check: pairing the dense
  // matrix of one formula with the block structure of another must fail.
  Prng rng(71);
  const Formula phi_a = parse_formula("nae 3 3 2\n1 2 3\n-1 2 -3\n");
  const Formula phi_b = parse_formula("nae 3 3 2\n1 -2 3\n1 2 -3\n");
  const DenseMatrix a = build_A(phi_a, PNorm(2.0));
  const DenseMatrix b = build_A(phi_b, PNorm(2.0));
  std::vector<double> y(9);
  for (double& yi : y) yi = 4.0 * rng.uniform01() - 2.0;
  const double dense_a = lp_norm_pow(matvec(a, y), PNorm(2.0));
  const double structured_b = structured_norm_pow(*b.structure, y, PNorm(2.0));
  CHECK(std::fabs(dense_a - structured_b) > 1e-6);

  // A tampered "gadget" bound is detected by the classification check: the
  // far-class floor is strictly above the binary-like value, so mixing the
  // two up cannot pass.
  const auto [far_value, far_class] = gadget_center_distance({0, 0, 1}, PNorm(2.0));
  CHECK(far_class == GadgetClass::far);
  CHECK(far_value > 3.0 / 4.0 + 1.0);
}

TEST_CASE("extraction uses the constraint-restricted sign test") {
  // n = 4 with a constraint over {1,2,3}: the full incidence row has a zero
  // at v4, which would make the unrestricted predicate vacuously true and
  // wrongly claim the unsatisfied all-positive row at x' = 0.
  const Formula phi(4, {Constraint{{Literal{1, +1}, Literal{2, +1}, Literal{3, +1}}},
                        Constraint{{Literal{2, +1}, Literal{3, +1}, Literal{4, +1}}}});
  const ExtractionResult ex = extract_assignment({0, 0, 0, 0}, phi);
  CHECK(ex.satisfied_fraction == Rational(0));
  CHECK(ex.sgndiff_fraction == Rational(0));  // no mixed rows, hence no claims
  CHECK(ex.sgndiff_rows_satisfied);
}

TEST_CASE("generic enumeration reproduces the exact pi2 minima") {
  // Third route: floating-point integer CVP on the dense A' agrees with the
  // scaled-integer enumerator at every special target. The slowest bundled
  // instances are skipped here; their classification is covered elsewhere.
  const std::vector<Formula> instances = bundled_pi2_instances();
  bool covered_no_instance = false;
  for (std::size_t idx : {0u, 1u, 2u, 4u, 5u, 7u}) {
    const Formula& phi = instances[idx];
    if (!brute_force_pi2(phi)) covered_no_instance = true;
    const ReductionInstance inst = build_A_prime(phi);
    const auto targets = special_targets(phi);
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
      const std::vector<double> t = matvec(inst.matrix, targets[ti]);
      const CvpResult bin = binary_cvp(inst.matrix, t, PNorm::inf());
      EnumOptions opts;
      opts.node_cap = 1'000'000'000ULL;
      const CvpResult gen = cvp_enumerate(inst.matrix, t, PNorm::inf(), bin.dist, opts);
      const Pi2TargetAnalysis ana = analyze_pi2_target(phi, ti);
      const double scaled = 144.0 * gen.dist;
      if (ana.integer_min_exceeds_radius) {
        CHECK(scaled >= 216.0 - 1e-6);
      } else {
        CHECK(scaled == doctest::Approx(static_cast<double>(ana.integer_min_scaled)).epsilon(1e-9));
      }
    }
  }
  CHECK(covered_no_instance);
}

TEST_CASE("the scaled pi2 distance matches the dense matrix route") {
  // Two independent routes to ||A'(w' - x')||_inf: the integer block
  // formulas used by the certification enumerator, and a dense product with
  // the constructed matrix. They must agree on random coefficients.
  Prng rng(81);
  for (const char* text : {"ae-nae 3 1 2 1\n1 2 3\n", "ae-nae 3 2 2 3\n1 2 3\n-1 -2 3\n1 -2 4\n",
                           "ae-nae 3 2 2 2\n1 2 3\n-1 -2 4\n"}) {
    const Formula phi = parse_formula(text);
    const ReductionInstance inst = build_A_prime(phi);
    const auto targets = special_targets(phi);
    const int dim = inst.matrix.cols;
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
      for (int t = 0; t < 50; ++t) {
        std::vector<long long> x(dim);
        for (auto& xi : x) xi = rng.uniform_int(-2, 3);
        const long long scaled = pi2_scaled_distance(phi, ti, x);

        std::vector<double> diff(dim);
        for (int c = 0; c < dim; ++c) diff[c] = targets[ti][c] - static_cast<double>(x[c]);
        const double dense = lp_norm(matvec(inst.matrix, diff), PNorm::inf());
        CHECK(static_cast<double>(scaled) == doctest::Approx(144.0 * dense).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("flipping every sign of a constraint changes nothing observable") {
  // Justifies certifying only sign-canonical families: the formula value is
  // complementation-invariant per constraint, and the centre distance only
  // sees row magnitudes.
  Prng rng(91);
  for (int t = 0; t < 50; ++t) {
    const Formula phi = random_formula(3, static_cast<int>(rng.uniform_int(1, 3)), 3, rng);
    std::vector<Constraint> flipped = phi.constraints();
    const std::size_t which = static_cast<std::size_t>(rng.uniform_int(0, phi.m() - 1));
    for (Literal& l : flipped[which].literals) l.sign = -l.sign;
    const Formula mirrored(phi.n(), flipped);

    CHECK(brute_force_value(phi).value == brute_force_value(mirrored).value);
    for (int p : {1, 2}) {
      std::vector<long long> x(9);
      for (auto& xi : x) xi = rng.uniform_int(-1, 2);
      CHECK(exact_center_norm_pow(phi, p, x) == exact_center_norm_pow(mirrored, p, x));
    }
  }
}

TEST_CASE("suite reports are deterministic and serialize stably") {
  SuiteOptions opts;
  opts.trials = 50;
  opts.seed = 1;
  const auto a = run_verify_suite("rounding", opts);
  const auto b = run_verify_suite("rounding", opts);
  CHECK(suite_report_json("rounding", a, opts).dump(2) ==
        suite_report_json("rounding", b, opts).dump(2));

  CHECK_THROWS_AS(run_verify_suite("bogus", opts), InputError);
}

TEST_CASE("small suite smoke runs are clean") {
  SuiteOptions opts;
  opts.trials = 60;
  opts.seed = 3;
  for (const std::string suite : {"identity", "completeness", "rounding"}) {
    long long failures = 0;
    for (const VerificationReport& rep : run_verify_suite(suite, opts)) failures += rep.failures;
    CHECK(failures == 0);
  }
}
