#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crplab/prng.hpp"
#include "crplab/rational.hpp"

namespace crplab {

// A signed variable occurrence. var is 1-based; sign -1 means negated.
struct Literal {
  int var = 0;
  int sign = +1;
};

// Exactly k literals over k distinct variables, k in {3, 4} here.
struct Constraint {
  std::vector<Literal> literals;
};

// 0/1 values for variables 1..n; bits[j-1] is the value of v_j.
using Assignment = std::vector<std::uint8_t>;

// A NAE-Ek-SAT formula, optionally with a universal/existential split:
// when quantified, variables 1..n' are universal and the rest existential.
class Formula {
 public:
  Formula() = default;
  Formula(int n, std::vector<Constraint> constraints,
          std::optional<int> universal_count = std::nullopt);

  int n() const { return n_; }
  int m() const { return static_cast<int>(constraints_.size()); }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  bool quantified() const { return universal_count_.has_value(); }
  int universal_count() const { return universal_count_.value_or(0); }

  // Number of constraints containing v_j or its negation; sums to k*m.
  std::vector<int> degrees() const;

  bool is_exactly_k(int k) const;

 private:
  void validate() const;

  int n_ = 0;
  std::vector<Constraint> constraints_;
  std::optional<int> universal_count_;
};

// True iff the k literal values under `a` are not all equal.
bool eval_constraint(const Constraint& c, const Assignment& a);

// Exact fraction of constraints satisfied. Undefined (input error) for m = 0.
Rational formula_value(const Formula& phi, const Assignment& a);

struct BruteForceOptions {
  int variable_cap = 24;
  int workers = 0;  // 0: take worker_count() from the environment
};

struct BruteForceResult {
  Rational value;
  Assignment witness;  // lexicographically smallest maximizer
};

// Exact max over all 2^n assignments.
BruteForceResult brute_force_value(const Formula& phi, const BruteForceOptions& opts = {});

// Forall/exists evaluation of a quantified formula: true iff every universal
// assignment admits an existential completion satisfying all constraints.
bool brute_force_pi2(const Formula& phi, const BruteForceOptions& opts = {});

// Splits each 4-ary constraint P(l1,l2,l3,l4) into P(l1,l2,s_i) and
// P(l3,l4,~s_i) with a fresh variable s_i = n + i. The output has n + m
// variables and 2m constraints, and its value equals (1 + val(phi))/2.
Formula reduce_e4_to_e3(const Formula& phi);

// Text format: header "nae <k> <n> <m>" or "ae-nae <k> <nA> <nE> <m>",
// then m lines of k nonzero signed integers. '#' starts a comment line.
Formula parse_formula(const std::string& text);
std::string serialize_formula(const Formula& phi);

// Random E-k formula: each constraint picks k distinct variables and signs.
Formula random_formula(int n, int m, int k, Prng& rng);

// Random formula together with an assignment satisfying every constraint
// (constraints violated by the planted assignment are resampled).
struct PlantedFormula {
  Formula formula;
  Assignment planted;
};
PlantedFormula planted_formula(int n, int m, int k, Prng& rng);

}  // namespace crplab
