#include "psi_spectral/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "psi_spectral/errors.hpp"
#include "psi_spectral/ode_oracle.hpp"
#include "psi_spectral/parallel.hpp"
#include "psi_spectral/reconstruction.hpp"

namespace psi_spectral {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

int parse_int(const std::string& s, int line, const char* what) {
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || errno == ERANGE || v < INT_MIN || v > INT_MAX)
    throw SpecError(std::string("expected an integer for ") + what + ", got '" + s + "'", line);
  return static_cast<int>(v);
}

double parse_real(const std::string& s, int line, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v))
    throw SpecError(std::string("expected a real number for ") + what + ", got '" + s + "'", line);
  return v;
}

Poly parse_poly(const std::vector<std::string>& toks, int line) {
  std::vector<GaussianRational> c;
  for (const auto& t : toks) {
    try {
      c.push_back(GaussianRational::parse(t));
    } catch (const SpecError& e) {
      throw SpecError(e.what(), line);
    }
  }
  return Poly(std::move(c));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw PreconditionError("cannot write " + path.string());
  os << text;
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ostringstream os;
  writer(os);
  write_text(path, os.str());
}

Json tolerances_json(const Tolerances& t) {
  return Json{{"sigma_rel_tol", t.sigma_rel_tol},   {"tail_tol", t.tail_tol},
              {"angle_tol", t.angle_tol},           {"root_tol", t.root_tol},
              {"rationalize_tol", t.rationalize_tol}, {"singular_guard", t.singular_guard},
              {"rk4_steps", t.rk4_steps}};
}

Json conditions_json(const ConditionsReport& c) {
  return Json{{"c2_bandwidth_ok", c.c2_bandwidth_ok},
              {"c21_sup_estimate", c.c21_sup_estimate},
              {"c22_min_ratio", c.c22_min_ratio},
              {"c22_eigen_equation_ok", c.c22_eigen_equation_ok},
              {"c23_envelope_const", c.c23_envelope_const}};
}

Json problem_json(const ProblemSpec& spec, const DiffOperator& p, int kd) {
  return Json{{"operator", p.to_string()},
              {"l", p.lcm_den().to_string()},
              {"order", p.order()},
              {"s0", s0(p)},
              {"lambda", spec.lambda.to_string()},
              {"k0", spec.k0},
              {"k_diamond", kd},
              {"bandwidth", 2 * p.order() + spec.k0 - kd},
              {"truncation", spec.truncation}};
}

Json run_json(const TruncationRun& r) {
  return Json{{"n_cols", r.n_cols},           {"n_rows", r.n_rows},
              {"candidates", r.candidates},   {"accepted", r.accepted},
              {"sigma_max", r.sigma_max},     {"smallest_relative_sigmas", r.smallest_sigmas}};
}

// Reruns a pipeline stage, labelling any library error with the stage name.
template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  const std::string label = std::string("[") + name + "] ";
  try {
    return f();
  } catch (const SpecError& e) {
    throw SpecError(label + e.what());
  } catch (const PreconditionError& e) {
    throw PreconditionError(label + e.what());
  } catch (const DomainError& e) {
    throw DomainError(label + e.what());
  } catch (const SolverError& e) {
    throw SolverError(label + e.what());
  }
}

struct VectorChecks {
  double max_residual = 0.0;
  double l2_norm = 0.0;
  bool oracle_run = false;
  double oracle_deviation = 0.0;
  std::string oracle_note;
  Trajectory trajectory;
};

VectorChecks check_vector(const ProblemSpec& spec, const DiffOperator& p, const ReconstructedFunction& f) {
  VectorChecks c;
  c.l2_norm = f.l2_norm();
  const auto grid = uniform_grid(spec.sample_lo, spec.sample_hi, spec.sample_count);
  c.max_residual = stage("residual", [&] { return max_residual(p, f, grid, spec.tol.singular_guard); });
  if (p.order() < 1) {
    c.oracle_note = "order-0 operator has no standard form";
    return c;
  }
  const StandardForm sf(p, spec.tol.root_tol);
  if (!sf.regular_on(spec.oracle_lo, spec.oracle_hi)) {
    c.oracle_note = "oracle interval contains a singular point";
    return c;
  }
  const CrosscheckReport rep = stage("oracle", [&] {
    return crosscheck(f, p, spec.oracle_lo, spec.oracle_hi, spec.tol.rk4_steps, &c.trajectory);
  });
  c.oracle_run = true;
  c.oracle_deviation = rep.max_deviation;
  return c;
}

Json checks_json(const VectorChecks& c) {
  Json j{{"l2_norm", c.l2_norm}, {"max_residual", c.max_residual}};
  if (c.oracle_run)
    j["oracle_deviation"] = c.oracle_deviation;
  else
    j["oracle_skipped"] = c.oracle_note;
  return j;
}

}  // namespace

GaussianRational parse_lambda(const std::string& text, double tol) {
  try {
    return GaussianRational::parse(text);
  } catch (const SpecError&) {
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0' || !std::isfinite(v)) throw SpecError("malformed lambda '" + text + "'");
  return GaussianRational(Rational::approximate(v, tol));
}

ProblemSpec parse_problem(std::istream& is) {
  ProblemSpec spec;
  std::optional<int> order;
  int order_line = 0;
  std::map<int, std::pair<RationalFunction, int>> coeffs;
  std::map<std::string, int> seen;
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto toks = split_ws(raw);
    if (toks.empty()) continue;
    const std::string key = toks[0];

    if (key == "p" || key == "r") {
      if (toks.size() < 4 || toks[2] != "=")
        throw SpecError("expected '" + key + " <m> = <coefficients>'", line);
      const int m = parse_int(toks[1], line, "derivative order");
      if (m < 0) throw SpecError("derivative order must be nonnegative", line);
      if (coeffs.count(m)) throw SpecError("coefficient of D^" + std::to_string(m) + " given twice", line);
      std::vector<std::string> rest(toks.begin() + 3, toks.end());
      if (key == "p") {
        coeffs.emplace(m, std::make_pair(RationalFunction(parse_poly(rest, line)), line));
      } else {
        const auto bar = std::find(rest.begin(), rest.end(), "|");
        if (bar == rest.end() || bar == rest.begin() || bar + 1 == rest.end())
          throw SpecError("expected 'r <m> = <numerator> | <denominator>'", line);
        const Poly num = parse_poly({rest.begin(), bar}, line);
        const Poly den = parse_poly({bar + 1, rest.end()}, line);
        if (den.is_zero()) throw SpecError("zero denominator polynomial", line);
        coeffs.emplace(m, std::make_pair(RationalFunction(num, den), line));
      }
      continue;
    }

    if (seen.count(key)) throw SpecError("key '" + key + "' given twice", line);
    seen[key] = line;
    auto want = [&](std::size_t n) {
      if (toks.size() != n + 1)
        throw SpecError("'" + key + "' takes " + std::to_string(n) + " value" + (n == 1 ? "" : "s"), line);
    };
    if (key == "order") {
      want(1);
      order = parse_int(toks[1], line, "order");
      if (*order < 0) throw SpecError("order must be nonnegative", line);
      order_line = line;
    } else if (key == "k0") {
      want(1);
      spec.k0 = parse_int(toks[1], line, "k0");
    } else if (key == "lambda") {
      want(1);
      try {
        spec.lambda = parse_lambda(toks[1], spec.tol.rationalize_tol);
      } catch (const SpecError& e) {
        throw SpecError(e.what(), line);
      }
    } else if (key == "kdiamond") {
      want(1);
      spec.k_diamond = parse_int(toks[1], line, "kdiamond");
    } else if (key == "truncation") {
      want(1);
      spec.truncation = parse_int(toks[1], line, "truncation");
      if (spec.truncation < 1) throw SpecError("truncation must be positive", line);
    } else if (key == "sigma_tol") {
      want(1);
      spec.tol.sigma_rel_tol = parse_real(toks[1], line, "sigma_tol");
    } else if (key == "tail_tol") {
      want(1);
      spec.tol.tail_tol = parse_real(toks[1], line, "tail_tol");
    } else if (key == "angle_tol") {
      want(1);
      spec.tol.angle_tol = parse_real(toks[1], line, "angle_tol");
    } else if (key == "sample") {
      want(3);
      spec.sample_lo = parse_real(toks[1], line, "sample start");
      spec.sample_hi = parse_real(toks[2], line, "sample end");
      spec.sample_count = parse_int(toks[3], line, "sample count");
      if (spec.sample_count < 1 || !(spec.sample_lo <= spec.sample_hi))
        throw SpecError("sample needs a <= b and a positive count", line);
    } else if (key == "oracle") {
      want(2);
      spec.oracle_lo = parse_real(toks[1], line, "oracle start");
      spec.oracle_hi = parse_real(toks[2], line, "oracle end");
      if (!(spec.oracle_lo < spec.oracle_hi)) throw SpecError("oracle interval needs a < b", line);
    } else {
      throw SpecError("unknown key '" + key + "'", line);
    }
  }

  if (!order) throw SpecError("missing 'order' line", line);
  std::vector<RationalFunction> rf(static_cast<std::size_t>(*order) + 1);
  for (auto& [m, entry] : coeffs) {
    if (m > *order)
      throw SpecError("coefficient of D^" + std::to_string(m) + " exceeds order " + std::to_string(*order),
                      entry.second);
    rf[static_cast<std::size_t>(m)] = entry.first;
  }
  if (*order > 0 && rf.back().is_zero())
    throw SpecError("leading coefficient of D^" + std::to_string(*order) + " is zero", order_line);
  spec.op = RationalDiffOperator(std::move(rf));
  return spec;
}

ProblemSpec parse_problem_file(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw SpecError("cannot open problem file " + path.string());
  return parse_problem(is);
}

DiffOperator folded_operator(const ProblemSpec& spec) { return clear_denominators(spec.op, spec.lambda); }

int resolve_k_diamond(const ProblemSpec& spec, const DiffOperator& p) {
  const int bound = max_k_diamond(p, spec.k0);
  if (spec.k_diamond) {
    if (*spec.k_diamond > bound)
      throw PreconditionError("k_diamond = " + std::to_string(*spec.k_diamond) + " violates k_diamond <= k0 - s0 = " +
                              std::to_string(bound));
    return *spec.k_diamond;
  }
  return std::min(bound, spec.k0 - std::max(p.lcm_den().degree(), 0));
}

CommandResult cmd_assemble(const ProblemSpec& spec, const fs::path& out_dir) {
  const DiffOperator p = folded_operator(spec);
  const int kd = resolve_k_diamond(spec, p);
  const BandMatrix b = stage("assemble", [&] { return assemble(p, spec.k0, kd, spec.truncation); });
  const ConditionsReport c = audit_conditions(b, CharacteristicOperator{kd});
  const FloatMatrix f = export_float(b);

  fs::create_directories(out_dir);
  CommandResult res;
  write_file(out_dir / "matrix.txt", [&](std::ostream& os) { write_dump(os, b); });
  write_file(out_dir / "matrix.csv", [&](std::ostream& os) { write_float_csv(os, b); });
  res.artifacts = {"matrix.txt", "matrix.csv", "report.json"};

  Json overflow = Json::array();
  for (const auto& [m, n] : f.overflow) overflow.push_back({m, n});
  Json report{{"command", "assemble"},
              {"problem", problem_json(spec, p, kd)},
              {"matrix", {{"rows", b.n_rows()}, {"cols", b.n_cols()}, {"nonzeros", b.nonzero_count()},
                          {"overflow", overflow}}},
              {"conditions", conditions_json(c)},
              {"tolerances", tolerances_json(spec.tol)},
              {"artifacts", res.artifacts}};
  write_text(out_dir / "report.json", report.dump(2) + "\n");
  res.summary = "assembled " + std::to_string(b.n_rows()) + "x" + std::to_string(b.n_cols()) +
                " matrix, bandwidth " + std::to_string(b.bandwidth()) + ", " + std::to_string(b.nonzero_count()) +
                " nonzeros";
  return res;
}

CommandResult cmd_solve(const ProblemSpec& spec, const fs::path& out_dir) {
  const DiffOperator p = folded_operator(spec);
  const int kd = resolve_k_diamond(spec, p);
  const BandMatrix b = stage("assemble", [&] { return assemble(p, spec.k0, kd, spec.truncation); });
  const ConditionsReport c = audit_conditions(b, CharacteristicOperator{kd});
  const NullspaceOptions opt{spec.tol.sigma_rel_tol, spec.tol.tail_tol, spec.tol.angle_tol};
  const NullspaceResult r = stage("nullspace", [&] { return solve(p, spec.k0, kd, spec.truncation, opt); });

  fs::create_directories(out_dir);
  CommandResult res;
  Json vectors = Json::array();
  const int max_order = std::max(p.order(), 1);
  for (std::size_t j = 0; j < r.vectors.size(); ++j) {
    const ReconstructedFunction f = stage("reconstruct", [&] {
      return ReconstructedFunction(spec.k0, r.vectors[j].values, max_order);
    });
    const VectorChecks chk = check_vector(spec, p, f);
    const std::string tag = std::to_string(j);
    write_file(out_dir / ("coefficients_" + tag + ".csv"), [&](std::ostream& os) { write_coefficient_csv(os, f); });
    write_file(out_dir / ("samples_" + tag + ".csv"), [&](std::ostream& os) {
      write_sample_csv(os, p, f, uniform_grid(spec.sample_lo, spec.sample_hi, spec.sample_count));
    });
    res.artifacts.push_back("coefficients_" + tag + ".csv");
    res.artifacts.push_back("samples_" + tag + ".csv");
    if (chk.oracle_run) {
      write_file(out_dir / ("trajectory_" + tag + ".csv"),
                 [&](std::ostream& os) { write_trajectory_csv(os, chk.trajectory); });
      res.artifacts.push_back("trajectory_" + tag + ".csv");
    }
    Json coeffs = Json::array();
    for (const auto& v : r.vectors[j].values) coeffs.push_back({v.real(), v.imag()});
    Json entry{{"tail_fraction", r.vectors[j].tail_fraction}};
    entry.update(checks_json(chk));
    entry["coefficients"] = std::move(coeffs);
    vectors.push_back(std::move(entry));
  }
  res.artifacts.push_back("report.json");

  Json report{{"command", "solve"},
              {"problem", problem_json(spec, p, kd)},
              {"conditions", conditions_json(c)},
              {"nullspace",
               {{"accepted_dimension", r.accepted_dimension},
                {"converged", r.converged},
                {"diagnostics", r.diagnostics},
                {"subspace_angle", r.subspace_angle_to_previous_truncation},
                {"residual_norm", r.residual_norm},
                {"singular_values", r.singular_values},
                {"coarse", run_json(r.coarse)},
                {"fine", run_json(r.fine)}}},
              {"vectors", vectors},
              {"tolerances", tolerances_json(spec.tol)},
              {"sample_grid", {spec.sample_lo, spec.sample_hi, spec.sample_count}},
              {"oracle_interval", {spec.oracle_lo, spec.oracle_hi}},
              {"artifacts", res.artifacts}};
  write_text(out_dir / "report.json", report.dump(2) + "\n");

  res.summary = "accepted_dimension " + std::to_string(r.accepted_dimension) + " at N=" +
                std::to_string(spec.truncation) + "/" + std::to_string(2 * spec.truncation);
  if (!r.converged) {
    res.exit_code = kNotConverged;
    res.summary += " (not converged: " + r.diagnostics + ")";
  }
  return res;
}

std::vector<double> scan_grid(double from, double to, double step) {
  std::vector<double> out;
  if (!(step > 0.0) || to < from) return out;
  const double slack = step * 1e-6;
  for (long i = 0;; ++i) {
    const double v = from + static_cast<double>(i) * step;
    if (v > to + slack) break;
    out.push_back(v);
  }
  return out;
}

std::vector<ScanPoint> scan(const ProblemSpec& spec, const std::vector<double>& lambdas) {
  std::vector<ScanPoint> out(lambdas.size());
  const NullspaceOptions opt{spec.tol.sigma_rel_tol, spec.tol.tail_tol, spec.tol.angle_tol};
  parallel_for(lambdas.size(), [&](std::size_t i) {
    ProblemSpec s = spec;
    s.lambda = GaussianRational(Rational::approximate(lambdas[i], spec.tol.rationalize_tol));
    const DiffOperator p = folded_operator(s);
    const int kd = resolve_k_diamond(s, p);
    const FloatMatrix f = export_float(assemble(p, s.k0, kd, s.truncation));
    ScanPoint pt;
    pt.lambda = lambdas[i];
    pt.min_sigma = leading_block_min_sigma(f.dense);
    try {
      pt.accepted_dimension = solve(p, s.k0, kd, s.truncation, opt).accepted_dimension;
    } catch (const SolverError&) {
      pt.accepted_dimension = 0;
    }
    out[i] = pt;
  });
  return out;
}

std::vector<std::size_t> scan_local_minima(const std::vector<ScanPoint>& points) {
  std::vector<std::size_t> out;
  if (points.size() < 2) return out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double v = points[i].min_sigma;
    const bool below_left = i == 0 || v < points[i - 1].min_sigma;
    const bool below_right = i + 1 == points.size() || v < points[i + 1].min_sigma;
    if (below_left && below_right) out.push_back(i);
  }
  return out;
}

void parse_scan_range(const std::string& text, double& from, double& to, double& step) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw SpecError("scan range must look like FROM:TO:STEP, got '" + text + "'");
  from = parse_real(text.substr(0, a), 0, "scan start");
  to = parse_real(text.substr(a + 1, b - a - 1), 0, "scan end");
  step = parse_real(text.substr(b + 1), 0, "scan step");
}

CommandResult cmd_scan(const ProblemSpec& spec, double from, double to, double step, const fs::path& out_dir) {
  const auto grid = scan_grid(from, to, step);
  const auto points = stage("scan", [&] { return scan(spec, grid); });
  fs::create_directories(out_dir);
  CommandResult res;
  write_file(out_dir / "scan.csv", [&](std::ostream& os) {
    os << "lambda,min_sigma,accepted_dimension\n";
    for (const auto& pt : points) os << fmt(pt.lambda) << ',' << fmt(pt.min_sigma) << ',' << pt.accepted_dimension << '\n';
  });
  Json minima = Json::array();
  for (std::size_t i : scan_local_minima(points)) minima.push_back(points[i].lambda);
  res.artifacts = {"scan.csv", "report.json"};
  Json report{{"command", "scan"},
              {"range", {from, to, step}},
              {"points", points.size()},
              {"local_minima", minima},
              {"k0", spec.k0},
              {"truncation", spec.truncation},
              {"tolerances", tolerances_json(spec.tol)},
              {"artifacts", res.artifacts}};
  write_text(out_dir / "report.json", report.dump(2) + "\n");
  res.summary = std::to_string(points.size()) + " scan points, " + std::to_string(minima.size()) + " local minima";
  return res;
}

CommandResult cmd_verify(const ProblemSpec& spec, const fs::path& coeff_csv, const fs::path& out_dir) {
  std::ifstream is(coeff_csv);
  if (!is) throw SpecError("cannot open coefficient file " + coeff_csv.string());
  const std::vector<Complex> coeffs = read_coefficient_csv(is);
  const std::size_t limit = 2 * static_cast<std::size_t>(spec.truncation);
  if (coeffs.size() > limit)
    throw PreconditionError("coefficient file has " + std::to_string(coeffs.size()) + " entries, more than 2N = " +
                            std::to_string(limit));
  const DiffOperator p = folded_operator(spec);
  const ReconstructedFunction f(spec.k0, coeffs, std::max(p.order(), 1));
  const VectorChecks chk = check_vector(spec, p, f);

  fs::create_directories(out_dir);
  CommandResult res;
  write_file(out_dir / "coefficients.csv", [&](std::ostream& os) { write_coefficient_csv(os, f); });
  write_file(out_dir / "samples.csv", [&](std::ostream& os) {
    write_sample_csv(os, p, f, uniform_grid(spec.sample_lo, spec.sample_hi, spec.sample_count));
  });
  res.artifacts = {"coefficients.csv", "samples.csv", "report.json"};
  Json report{{"command", "verify"},
              {"terms", coeffs.size()},
              {"k0", spec.k0},
              {"lambda", spec.lambda.to_string()},
              {"checks", checks_json(chk)},
              {"tolerances", tolerances_json(spec.tol)},
              {"sample_grid", {spec.sample_lo, spec.sample_hi, spec.sample_count}},
              {"oracle_interval", {spec.oracle_lo, spec.oracle_hi}},
              {"artifacts", res.artifacts}};
  write_text(out_dir / "report.json", report.dump(2) + "\n");
  res.summary = "max residual " + fmt(chk.max_residual) +
                (chk.oracle_run ? ", oracle deviation " + fmt(chk.oracle_deviation) : ", oracle skipped");
  return res;
}

}  // namespace psi_spectral
