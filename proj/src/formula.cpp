#include "crplab/formula.hpp"

#include <algorithm>
#include <sstream>

#include "crplab/errors.hpp"
#include "crplab/parallel.hpp"

namespace crplab {

namespace {

// Assignment encoding for exhaustive search: index bit (n-1-j) holds the
// value of v_{j+1}, so ascending indices enumerate assignments in
// lexicographic order (v_1 most significant).
Assignment index_to_assignment(std::uint64_t idx, int n) {
  Assignment a(n);
  for (int j = 0; j < n; ++j) a[j] = static_cast<std::uint8_t>((idx >> (n - 1 - j)) & 1);
  return a;
}

int count_satisfied(const Formula& phi, const Assignment& a) {
  int sat = 0;
  for (const Constraint& c : phi.constraints())
    if (eval_constraint(c, a)) ++sat;
  return sat;
}

bool satisfies_all(const Formula& phi, const Assignment& a) {
  for (const Constraint& c : phi.constraints())
    if (!eval_constraint(c, a)) return false;
  return true;
}

}  // namespace

Formula::Formula(int n, std::vector<Constraint> constraints, std::optional<int> universal_count)
    : n_(n), constraints_(std::move(constraints)), universal_count_(universal_count) {
  validate();
}

void Formula::validate() const {
  if (n_ < 0) throw InputError("formula: negative variable count");
  if (universal_count_ && (*universal_count_ < 0 || *universal_count_ > n_))
    throw InputError("formula: universal split out of range");
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const auto& lits = constraints_[i].literals;
    const int k = static_cast<int>(lits.size());
    if (k != 3 && k != 4)
      throw InputError("constraint " + std::to_string(i + 1) + ": arity must be 3 or 4");
    for (const Literal& l : lits) {
      if (l.sign != 1 && l.sign != -1)
        throw InputError("constraint " + std::to_string(i + 1) + ": sign must be +1 or -1");
      if (l.var < 1 || l.var > n_)
        throw InputError("constraint " + std::to_string(i + 1) + ": variable index out of range");
    }
    for (int x = 0; x < k; ++x)
      for (int y = x + 1; y < k; ++y)
        if (lits[x].var == lits[y].var)
          throw InputError("constraint " + std::to_string(i + 1) + ": repeated variable " +
                           std::to_string(lits[x].var));
  }
}

std::vector<int> Formula::degrees() const {
  std::vector<int> deg(n_, 0);
  for (const Constraint& c : constraints_)
    for (const Literal& l : c.literals) ++deg[l.var - 1];
  return deg;
}

bool Formula::is_exactly_k(int k) const {
  for (const Constraint& c : constraints_)
    if (static_cast<int>(c.literals.size()) != k) return false;
  return true;
}

bool eval_constraint(const Constraint& c, const Assignment& a) {
  bool seen_true = false;
  bool seen_false = false;
  for (const Literal& l : c.literals) {
    if (l.var < 1 || static_cast<std::size_t>(l.var) > a.size())
      throw InputError("eval_constraint: variable index out of range of assignment");
    const bool value = (a[l.var - 1] != 0) != (l.sign < 0);
    (value ? seen_true : seen_false) = true;
  }
  return seen_true && seen_false;
}

Rational formula_value(const Formula& phi, const Assignment& a) {
  if (phi.m() == 0) throw InputError("formula_value: undefined for a formula with no constraints");
  if (static_cast<int>(a.size()) != phi.n())
    throw InputError("formula_value: assignment length mismatch");
  return Rational(count_satisfied(phi, a), phi.m());
}

BruteForceResult brute_force_value(const Formula& phi, const BruteForceOptions& opts) {
  if (phi.n() > opts.variable_cap)
    throw ResourceError("brute_force_value: " + std::to_string(phi.n()) +
                        " variables exceeds cap " + std::to_string(opts.variable_cap));
  if (phi.m() == 0) throw InputError("brute_force_value: undefined for a formula with no constraints");

  const std::uint64_t total = 1ULL << phi.n();
  const int workers = opts.workers > 0 ? opts.workers : worker_count();

  struct ChunkBest {
    int sat = -1;
    std::uint64_t idx = 0;
  };
  std::vector<ChunkBest> best(workers == 0 ? 1 : workers);

  parallel_chunks(total, workers, [&](int chunk, std::uint64_t begin, std::uint64_t end) {
    ChunkBest local;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const int sat = count_satisfied(phi, index_to_assignment(idx, phi.n()));
      if (sat > local.sat) {
        local.sat = sat;
        local.idx = idx;
      }
    }
    best[chunk] = local;
  });

  ChunkBest overall;
  for (const ChunkBest& b : best) {
    // Strict > keeps the smallest index on ties: chunks are scanned in
    // ascending index order, so the merged witness is the lexicographically
    // smallest maximizer regardless of the worker count.
    if (b.sat > overall.sat) overall = b;
  }
  return {Rational(overall.sat, phi.m()), index_to_assignment(overall.idx, phi.n())};
}

bool brute_force_pi2(const Formula& phi, const BruteForceOptions& opts) {
  if (!phi.quantified()) throw InputError("brute_force_pi2: formula has no universal/existential split");
  if (phi.n() > opts.variable_cap)
    throw ResourceError("brute_force_pi2: " + std::to_string(phi.n()) + " variables exceeds cap " +
                        std::to_string(opts.variable_cap));

  const int nu = phi.universal_count();
  const int ne = phi.n() - nu;
  const std::uint64_t branches = 1ULL << nu;
  const std::uint64_t completions = 1ULL << ne;
  const int workers = opts.workers > 0 ? opts.workers : worker_count();

  std::vector<std::uint8_t> branch_ok(branches, 0);
  parallel_chunks(branches, workers, [&](int, std::uint64_t begin, std::uint64_t end) {
    Assignment a(phi.n());
    for (std::uint64_t ub = begin; ub < end; ++ub) {
      for (int j = 0; j < nu; ++j) a[j] = static_cast<std::uint8_t>((ub >> (nu - 1 - j)) & 1);
      bool ok = false;
      for (std::uint64_t eb = 0; eb < completions && !ok; ++eb) {
        for (int j = 0; j < ne; ++j)
          a[nu + j] = static_cast<std::uint8_t>((eb >> (ne - 1 - j)) & 1);
        ok = satisfies_all(phi, a);
      }
      branch_ok[ub] = ok ? 1 : 0;
    }
  });

  return std::all_of(branch_ok.begin(), branch_ok.end(), [](std::uint8_t v) { return v != 0; });
}

Formula reduce_e4_to_e3(const Formula& phi) {
  if (!phi.is_exactly_k(4)) throw InputError("reduce_e4_to_e3: input must be NAE-E4");
  std::vector<Constraint> out;
  out.reserve(2 * static_cast<std::size_t>(phi.m()));
  const int n = phi.n();
  for (int i = 0; i < phi.m(); ++i) {
    const auto& l = phi.constraints()[i].literals;
    const int fresh = n + i + 1;
    out.push_back(Constraint{{l[0], l[1], Literal{fresh, +1}}});
    out.push_back(Constraint{{l[2], l[3], Literal{fresh, -1}}});
  }
  std::optional<int> universal;
  if (phi.quantified()) universal = phi.universal_count();  // fresh vars are existential
  return Formula(n + phi.m(), std::move(out), universal);
}

Formula parse_formula(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  auto next_data_line = [&](std::string& out) -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      std::size_t first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (line[first] == '#') continue;
      out = line;
      return true;
    }
    return false;
  };

  std::string header;
  if (!next_data_line(header)) throw InputError("formula parse: empty input");

  std::istringstream hs(header);
  std::string kind;
  hs >> kind;
  int k = 0, n = 0, m = 0;
  std::optional<int> universal;
  if (kind == "nae") {
    if (!(hs >> k >> n >> m))
      throw InputError("line " + std::to_string(line_no) + ": expected 'nae <k> <n> <m>'");
  } else if (kind == "ae-nae") {
    int na = 0, ne = 0;
    if (!(hs >> k >> na >> ne >> m))
      throw InputError("line " + std::to_string(line_no) + ": expected 'ae-nae <k> <nA> <nE> <m>'");
    if (na < 0 || ne < 0)
      throw InputError("line " + std::to_string(line_no) + ": negative variable counts");
    n = na + ne;
    universal = na;
  } else {
    throw InputError("line " + std::to_string(line_no) + ": unknown header '" + kind + "'");
  }
  std::string rest;
  if (hs >> rest) throw InputError("line " + std::to_string(line_no) + ": trailing tokens in header");
  if (k != 3 && k != 4) throw InputError("line " + std::to_string(line_no) + ": arity must be 3 or 4");
  if (n < 0 || m < 0) throw InputError("line " + std::to_string(line_no) + ": negative counts");

  std::vector<Constraint> constraints;
  constraints.reserve(m);
  for (int i = 0; i < m; ++i) {
    std::string data;
    if (!next_data_line(data))
      throw InputError("line " + std::to_string(line_no + 1) + ": expected constraint " +
                       std::to_string(i + 1) + " of " + std::to_string(m));
    std::istringstream cs(data);
    Constraint c;
    long long v = 0;
    while (cs >> v) {
      if (v == 0) throw InputError("line " + std::to_string(line_no) + ": literal 0 is not allowed");
      const int var = static_cast<int>(v < 0 ? -v : v);
      if (var > n)
        throw InputError("line " + std::to_string(line_no) + ": variable " + std::to_string(var) +
                         " out of range [1," + std::to_string(n) + "]");
      c.literals.push_back(Literal{var, v < 0 ? -1 : +1});
    }
    if (!cs.eof()) throw InputError("line " + std::to_string(line_no) + ": malformed literal");
    if (static_cast<int>(c.literals.size()) != k)
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(k) +
                       " literals, got " + std::to_string(c.literals.size()));
    for (std::size_t x = 0; x < c.literals.size(); ++x)
      for (std::size_t y = x + 1; y < c.literals.size(); ++y)
        if (c.literals[x].var == c.literals[y].var)
          throw InputError("line " + std::to_string(line_no) + ": repeated variable " +
                           std::to_string(c.literals[x].var));
    constraints.push_back(std::move(c));
  }
  std::string tail;
  if (next_data_line(tail))
    throw InputError("line " + std::to_string(line_no) + ": trailing data after " +
                     std::to_string(m) + " constraints");

  return Formula(n, std::move(constraints), universal);
}

std::string serialize_formula(const Formula& phi) {
  const int k = phi.m() > 0 ? static_cast<int>(phi.constraints()[0].literals.size()) : 3;
  std::string out;
  if (phi.quantified()) {
    out = "ae-nae " + std::to_string(k) + " " + std::to_string(phi.universal_count()) + " " +
          std::to_string(phi.n() - phi.universal_count()) + " " + std::to_string(phi.m()) + "\n";
  } else {
    out = "nae " + std::to_string(k) + " " + std::to_string(phi.n()) + " " +
          std::to_string(phi.m()) + "\n";
  }
  for (const Constraint& c : phi.constraints()) {
    for (std::size_t i = 0; i < c.literals.size(); ++i) {
      out += std::to_string(c.literals[i].sign * c.literals[i].var);
      out += (i + 1 == c.literals.size()) ? '\n' : ' ';
    }
  }
  return out;
}

Formula random_formula(int n, int m, int k, Prng& rng) {
  if (n < k) throw InputError("random_formula: need at least k variables");
  std::vector<Constraint> cs;
  cs.reserve(m);
  for (int i = 0; i < m; ++i) {
    Constraint c;
    std::vector<int> vars;
    while (static_cast<int>(vars.size()) < k) {
      const int v = static_cast<int>(rng.uniform_int(1, n));
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
    for (int v : vars) c.literals.push_back(Literal{v, rng.coin() ? +1 : -1});
    cs.push_back(std::move(c));
  }
  return Formula(n, std::move(cs));
}

PlantedFormula planted_formula(int n, int m, int k, Prng& rng) {
  if (n < k) throw InputError("planted_formula: need at least k variables");
  Assignment planted(n);
  for (int j = 0; j < n; ++j) planted[j] = rng.coin() ? 1 : 0;

  std::vector<Constraint> cs;
  cs.reserve(m);
  while (static_cast<int>(cs.size()) < m) {
    Formula one = random_formula(n, 1, k, rng);
    if (eval_constraint(one.constraints()[0], planted)) cs.push_back(one.constraints()[0]);
  }
  return {Formula(n, std::move(cs)), planted};
}

}  // namespace crplab
