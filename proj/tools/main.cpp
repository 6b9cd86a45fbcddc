#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "psi_spectral/cli.hpp"
#include "psi_spectral/errors.hpp"

namespace ps = psi_spectral;

namespace {

struct Options {
  std::string problem;
  std::string out = "out";
  std::optional<std::string> lambda;
  std::optional<int> truncation;
  std::optional<int> k_diamond;
  std::optional<double> sigma_tol, tail_tol, angle_tol, root_tol, rationalize_tol, singular_guard;
  std::optional<int> rk4_steps;
  std::string scan_range;
  std::string coefficients;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--problem", o.problem, "Problem file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_option("--lambda", o.lambda, "Spectral parameter (a/b+c/d*i or decimal)");
  cmd->add_option("--truncation", o.truncation, "Truncation N")->check(CLI::PositiveNumber);
  cmd->add_option("--kdiamond", o.k_diamond, "Target level k_diamond");
  cmd->add_option("--sigma-tol", o.sigma_tol, "Relative singular value threshold")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--tail-tol", o.tail_tol, "Tail energy threshold")->check(CLI::PositiveNumber);
  cmd->add_option("--angle-tol", o.angle_tol, "Principal angle threshold (rad)")->check(CLI::PositiveNumber);
  cmd->add_option("--root-tol", o.root_tol, "Singular point isolation tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--rationalize-tol", o.rationalize_tol, "Decimal lambda rationalisation tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--singular-guard", o.singular_guard, "Residual exclusion radius around singular points")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--rk4-steps", o.rk4_steps, "RK4 steps for the ODE crosscheck")->check(CLI::PositiveNumber);
}

ps::ProblemSpec load(const Options& o) {
  ps::ProblemSpec spec = ps::parse_problem_file(o.problem);
  auto& t = spec.tol;
  if (o.sigma_tol) t.sigma_rel_tol = *o.sigma_tol;
  if (o.tail_tol) t.tail_tol = *o.tail_tol;
  if (o.angle_tol) t.angle_tol = *o.angle_tol;
  if (o.root_tol) t.root_tol = *o.root_tol;
  if (o.rationalize_tol) t.rationalize_tol = *o.rationalize_tol;
  if (o.singular_guard) t.singular_guard = *o.singular_guard;
  if (o.rk4_steps) t.rk4_steps = *o.rk4_steps;
  if (o.lambda) spec.lambda = ps::parse_lambda(*o.lambda, t.rationalize_tol);
  if (o.truncation) spec.truncation = *o.truncation;
  if (o.k_diamond) spec.k_diamond = *o.k_diamond;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver for polynomial-coefficient ODEs on the real line"};
  app.require_subcommand(1);
  Options o;
  auto* assemble = app.add_subcommand("assemble", "Write the exact band matrix and condition report");
  auto* solve = app.add_subcommand("solve", "Run the full pipeline and write coefficients, samples and a report");
  auto* scan = app.add_subcommand("scan", "Scan lambda and record the smallest singular value");
  auto* verify = app.add_subcommand("verify", "Check a coefficient CSV against the operator");
  for (auto* cmd : {assemble, solve, scan, verify}) add_common(cmd, o);
  scan->add_option("--scan", o.scan_range, "Lambda grid FROM:TO:STEP")->required();
  verify->add_option("--coefficients", o.coefficients, "Coefficient CSV (n,n_dot,re,im)")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ps::kSpecError;
  }

  try {
    const ps::ProblemSpec spec = load(o);
    ps::CommandResult res;
    if (assemble->parsed()) {
      res = ps::cmd_assemble(spec, o.out);
    } else if (solve->parsed()) {
      res = ps::cmd_solve(spec, o.out);
    } else if (scan->parsed()) {
      double from = 0, to = 0, step = 0;
      ps::parse_scan_range(o.scan_range, from, to, step);
      res = ps::cmd_scan(spec, from, to, step, o.out);
    } else {
      res = ps::cmd_verify(spec, o.coefficients, o.out);
    }
    std::cout << res.summary << '\n';
    for (const auto& a : res.artifacts) std::cout << "  " << (std::filesystem::path(o.out) / a).string() << '\n';
    return res.exit_code;
  } catch (const ps::SpecError& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return ps::kSpecError;
  } catch (const ps::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return ps::kPreconditionError;
  } catch (const ps::DomainError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return ps::kPreconditionError;
  } catch (const ps::SolverError& e) {
    std::cerr << "solver failed: " << e.what() << '\n';
    return ps::kNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
}
