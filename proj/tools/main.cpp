// crplab command-line front end: reductions, exact solvers, verification
// suites and the approximation-factor curve.
//
// Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource cap.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crplab/cvp.hpp"
#include "crplab/errors.hpp"
#include "crplab/formula.hpp"
#include "crplab/matrix.hpp"
#include "crplab/reduction.hpp"
#include "crplab/verifier.hpp"

namespace {

using namespace crplab;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitResourceError = 3;

PNorm parse_pnorm(const std::string& s) {
  if (s == "inf" || s == "INF" || s == "infinity") return PNorm::inf();
  try {
    return PNorm(std::stod(s));
  } catch (const std::invalid_argument&) {
    throw InputError("cannot parse p-norm value '" + s + "'");
  } catch (const std::out_of_range&) {
    throw InputError("p-norm value '" + s + "' is out of range");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  out << content;
}

// Target spec: "half" (all 1/2), "@file" (whitespace numbers), or an inline
// comma/space separated list.
std::vector<double> parse_target(const std::string& spec, int dim) {
  if (spec == "half") return std::vector<double>(dim, 0.5);
  std::string data = spec;
  if (!spec.empty() && spec[0] == '@') data = read_file(spec.substr(1));
  for (char& c : data)
    if (c == ',') c = ' ';
  std::istringstream in(data);
  std::vector<double> v;
  double x;
  while (in >> x) v.push_back(x);
  if (!in.eof()) throw InputError("malformed number in target spec");
  if (static_cast<int>(v.size()) != dim)
    throw InputError("target has " + std::to_string(v.size()) + " entries, expected " +
                     std::to_string(dim));
  return v;
}

std::string default_prefix(const std::string& input, const std::string& suffix) {
  const std::size_t dot = input.rfind('.');
  const std::string stem = dot == std::string::npos ? input : input.substr(0, dot);
  return stem + suffix;
}

std::string format_cvp_result(const CvpResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "distance %.12g\n", r.dist);
  std::string out = buf;
  out += "coeffs";
  for (long long c : r.coeffs) {
    std::snprintf(buf, sizeof(buf), " %lld", c);
    out += buf;
  }
  out += "\n";
  if (std::isinf(r.certified_radius)) {
    out += "certified_radius exhaustive\n";
  } else {
    std::snprintf(buf, sizeof(buf), "certified_radius %.12g\n", r.certified_radius);
    out += buf;
  }
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_file(out_path, text);
}

int cmd_reduce(const std::string& kind, const std::string& input, const std::string& p_str,
               double eps, std::string out) {
  const Formula phi = parse_formula(read_file(input));
  if (kind == "e4toe3") {
    const Formula reduced = reduce_e4_to_e3(phi);
    if (out.empty()) out = default_prefix(input, ".e3.nae");
    write_file(out, serialize_formula(reduced));
    std::printf("wrote %s: %d variables, %d constraints\n", out.c_str(), reduced.n(), reduced.m());
    return kExitOk;
  }
  if (kind == "sat2crp") {
    const PNorm p = parse_pnorm(p_str);
    if (p.is_inf())
      throw InputError("sat2crp needs a finite p (the distance threshold is finite-p only)");
    const ReductionInstance inst = make_np_instance(phi, p, eps);
    if (out.empty()) out = default_prefix(input, ".crp");
    write_instance(inst, out);
    std::printf("wrote %s.mat and %s.json: %dx%d matrix, r %.12g, gamma %.12g\n", out.c_str(),
                out.c_str(), inst.matrix.rows, inst.matrix.cols, inst.threshold, inst.gamma);
    return kExitOk;
  }
  if (kind == "sat2crp-pi2") {
    const ReductionInstance inst = build_A_prime(phi);
    if (out.empty()) out = default_prefix(input, ".pi2");
    write_instance(inst, out);
    std::printf("wrote %s.mat and %s.json: %dx%d matrix, r %.12g, gamma %.12g\n", out.c_str(),
                out.c_str(), inst.matrix.rows, inst.matrix.cols, inst.threshold, inst.gamma);
    return kExitOk;
  }
  throw InputError("unknown reduce kind '" + kind + "'");
}

int cmd_solve(const std::string& kind, const std::string& matrix_path, const std::string& p_str,
              const std::vector<std::string>& target_specs, int grid, double radius,
              std::uint64_t node_cap, const std::string& out_path) {
  const DenseMatrix b = parse_matrix(read_file(matrix_path));
  const PNorm p = parse_pnorm(p_str);
  EnumOptions opts;
  opts.node_cap = node_cap;

  if (kind == "cvp" || kind == "binary-cvp") {
    if (target_specs.size() != 1) throw InputError(kind + " needs exactly one --target");
    // For these two the target lives in the ambient space; "half" means the
    // centre point B * (1/2 * 1).
    std::vector<double> t;
    if (target_specs[0] == "half") {
      t = matvec(b, std::vector<double>(b.cols, 0.5));
    } else {
      t = parse_target(target_specs[0], b.rows);
    }
    if (kind == "binary-cvp") {
      emit(format_cvp_result(binary_cvp(b, t, p)), out_path);
    } else {
      const double initial = radius > 0 ? radius : lp_norm(t, p);  // x = 0 is always feasible
      emit(format_cvp_result(cvp_enumerate(b, t, p, initial, opts)), out_path);
    }
    return kExitOk;
  }
  if (kind == "lindisc-lb") {
    if (grid < 1) throw InputError("lindisc-lb needs --grid g >= 1");
    const GridSearchResult r = lindisc_grid_lb(b, p, grid);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "lindisc_lower_bound %.12g\n", r.value);
    std::string text = buf;
    text += "witness_w";
    for (double w : r.witness) {
      std::snprintf(buf, sizeof(buf), " %.12g", w);
      text += buf;
    }
    text += "\n";
    emit(text, out_path);
    return kExitOk;
  }
  if (kind == "mu-lb") {
    if (target_specs.empty()) throw InputError("mu-lb needs at least one --target");
    std::vector<std::vector<double>> targets;
    for (const std::string& spec : target_specs) targets.push_back(parse_target(spec, b.cols));
    const MuBoundResult r = mu_lower_bound(b, p, targets, opts);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "mu_lower_bound %.12g\n", r.value);
    std::string text = buf;
    text += "witness_w";
    for (double w : r.witness) {
      std::snprintf(buf, sizeof(buf), " %.12g", w);
      text += buf;
    }
    text += "\n" + format_cvp_result(r.best);
    emit(text, out_path);
    return kExitOk;
  }
  throw InputError("unknown solve kind '" + kind + "'");
}

int cmd_verify(const std::string& suite, long long trials, std::uint64_t seed,
               const std::vector<std::string>& p_list, const std::string& out, bool timings) {
  SuiteOptions opts;
  opts.trials = trials;
  opts.seed = seed;
  opts.with_timings = timings;
  for (const std::string& ps : p_list) {
    const PNorm p = parse_pnorm(ps);
    if (p.is_inf()) throw InputError("verify suites sample finite p only");
    opts.ps.push_back(p.value());
  }

  const std::vector<VerificationReport> reports = run_verify_suite(suite, opts);
  const nlohmann::json j = suite_report_json(suite, reports, opts);
  const std::string text = j.dump(2) + "\n";
  if (out.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_file(out, text);

  const long long failures = j["failures"].get<long long>();
  const long long inconclusive = j["inconclusive"].get<long long>();
  return failures == 0 && inconclusive == 0 ? kExitOk : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crplab: NAE-SAT to covering-radius reductions with exact desk-scale certification"};
  app.require_subcommand(1);

  // reduce
  auto* reduce = app.add_subcommand("reduce", "build reduction outputs from a formula file");
  std::string reduce_kind, reduce_input, reduce_p = "2", reduce_out;
  double reduce_eps = 1.0;
  reduce->add_option("kind", reduce_kind, "e4toe3 | sat2crp | sat2crp-pi2")->required();
  reduce->add_option("input", reduce_input, "formula file")->required();
  reduce->add_option("--p", reduce_p, "lp norm exponent (finite for sat2crp)");
  reduce->add_option("--eps", reduce_eps, "completeness level for the distance threshold");
  reduce->add_option("--out", reduce_out, "output path or prefix");

  // solve
  auto* solve = app.add_subcommand("solve", "run lattice searches on a matrix file");
  std::string solve_kind, solve_matrix, solve_p = "2";
  std::vector<std::string> solve_targets;
  int solve_grid = 0;
  double solve_radius = 0.0;
  std::uint64_t solve_node_cap = 100'000'000;
  std::string solve_out;
  solve->add_option("kind", solve_kind, "cvp | binary-cvp | lindisc-lb | mu-lb")->required();
  solve->add_option("matrix", solve_matrix, "matrix file")->required();
  solve->add_option("--p", solve_p, "lp norm exponent, 'inf' allowed");
  solve->add_option("--target", solve_targets,
                    "target vector: 'half', '@file', or comma-separated numbers (repeatable for mu-lb)");
  solve->add_option("--grid", solve_grid, "grid resolution g for lindisc-lb");
  solve->add_option("--radius", solve_radius, "initial certified radius for cvp");
  solve->add_option("--node-cap", solve_node_cap, "enumeration node cap");
  solve->add_option("--out", solve_out, "write the report to a file (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "run a certification suite, JSON report to stdout");
  std::string verify_suite, verify_out;
  long long verify_trials = 0;
  std::uint64_t verify_seed = 1;
  std::vector<std::string> verify_ps;
  bool verify_timings = false;
  verify->add_option("suite", verify_suite, "gadget | identity | completeness | rounding | np | pi2 | all")
      ->required();
  verify->add_option("--trials", verify_trials, "randomized trial count (0: suite default)");
  verify->add_option("--seed", verify_seed, "PRNG seed recorded in the report");
  verify->add_option("--p", verify_ps, "finite p values sampled by randomized suites");
  verify->add_option("--out", verify_out, "write the JSON report to a file");
  verify->add_flag("--timings", verify_timings,
                   "record wall-clock timing_ms (report is no longer run-to-run identical)");

  // gamma (+ curve)
  auto* gamma_cmd = app.add_subcommand("gamma", "evaluate the hardness factor gamma(p)");
  std::string gamma_p;
  gamma_cmd->add_option("--p", gamma_p, "evaluate gamma at this finite p");
  auto* curve = gamma_cmd->add_subcommand("curve", "emit a CSV of log-spaced samples");
  double curve_pmin = 1.0, curve_pmax = 10000.0;
  int curve_steps = 200;
  std::string curve_out;
  curve->add_option("--pmin", curve_pmin, "smallest p (>= 1)");
  curve->add_option("--pmax", curve_pmax, "largest p");
  curve->add_option("--steps", curve_steps, "number of samples");
  curve->add_option("--out", curve_out, "CSV output file (default stdout)");

  // p0
  auto* p0_cmd = app.add_subcommand("p0", "bisect the unique root of gamma(p) = 1");
  double p0_tol = 1e-6;
  p0_cmd->add_option("--tol", p0_tol, "bracket width tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (reduce->parsed()) return cmd_reduce(reduce_kind, reduce_input, reduce_p, reduce_eps, reduce_out);
    if (solve->parsed())
      return cmd_solve(solve_kind, solve_matrix, solve_p, solve_targets, solve_grid, solve_radius,
                       solve_node_cap, solve_out);
    if (verify->parsed())
      return cmd_verify(verify_suite, verify_trials, verify_seed, verify_ps, verify_out,
                        verify_timings);
    if (gamma_cmd->parsed()) {
      if (curve->parsed()) {
        const std::string csv = gamma_curve_csv(curve_pmin, curve_pmax, curve_steps);
        if (curve_out.empty())
          std::fputs(csv.c_str(), stdout);
        else
          write_file(curve_out, csv);
        return kExitOk;
      }
      if (gamma_p.empty()) throw InputError("gamma needs --p (or the 'curve' subcommand)");
      const PNorm p = parse_pnorm(gamma_p);
      if (p.is_inf()) throw InputError("gamma is a finite-p quantity; its limit is 9/8");
      std::printf("%.12g\n", np_hardness_factor(p.value()));
      return kExitOk;
    }
    if (p0_cmd->parsed()) {
      std::printf("%.12g\n", find_p0(p0_tol));
      return kExitOk;
    }
  } catch (const LemmaViolation& e) {
    std::fprintf(stderr, "lemma violation: %s\n", e.what());
    return kExitVerifyFailure;
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "resource cap: %s\n", e.what());
    return kExitResourceError;
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  }
  return kExitOk;
}
