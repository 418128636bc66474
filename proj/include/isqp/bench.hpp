#pragma once

// Benchmark-harness layer behind the CLI: method names, run execution,
// trace CSV and summary JSON emission, the alpha-sweep table, and the
// derivative/reference checker. Kept in the library so the commands are
// directly testable; the CLI binary is a thin dispatcher.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isqp/derivative_check.hpp"
#include "isqp/errors.hpp"
#include "isqp/problems.hpp"
#include "isqp/solver.hpp"

namespace isqp {

enum class Method { SqpEh, SqpGgn, IsqpGgn, IsqpI };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::SqpEh: return "sqp-eh";
    case Method::SqpGgn: return "sqp-ggn";
    case Method::IsqpGgn: return "isqp-ggn";
    case Method::IsqpI: return "isqp-i";
  }
  return "?";
}

inline Method method_from_string(const std::string& s) {
  if (s == "sqp-eh") return Method::SqpEh;
  if (s == "sqp-ggn") return Method::SqpGgn;
  if (s == "isqp-ggn") return Method::IsqpGgn;
  if (s == "isqp-i") return Method::IsqpI;
  throw InvalidArgument("unknown method '" + s + "' (expected sqp-eh|sqp-ggn|isqp-ggn|isqp-i)");
}

inline HessianStrategy strategy_for(Method m) {
  switch (m) {
    case Method::SqpEh: return HessianStrategy::exact();
    case Method::SqpGgn: return HessianStrategy::ggn();
    case Method::IsqpGgn: return HessianStrategy::ggn();
    case Method::IsqpI: return HessianStrategy::identity();
  }
  throw InvalidArgument("unknown method");
}

/// The fixed method/alpha contract: pure-SQP methods run at alpha = 1,
/// interpolated methods need a user alpha strictly inside (0, 1).
inline void validate_alpha_for(Method m, double alpha) {
  const bool pure = m == Method::SqpEh || m == Method::SqpGgn;
  if (pure && alpha != 1.0)
    throw InvalidArgument(std::string(to_string(m)) + " runs at alpha = 1");
  if (!pure && !(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument(std::string(to_string(m)) + " needs --alpha in (0, 1)");
}

/// Parses "v" or "start:step:end" (inclusive end, within 1e-12 slack).
inline std::vector<double> parse_alpha_range(const std::string& text) {
  std::vector<double> out;
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    out.push_back(std::stod(text));
    return out;
  }
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw InvalidArgument("alpha range must be start:step:end");
  const double start = std::stod(text.substr(0, c1));
  const double step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const double end = std::stod(text.substr(c2 + 1));
  if (!(step > 0.0) || end < start) throw InvalidArgument("alpha range must have step > 0 and end >= start");
  for (double a = start; a <= end + 1e-12; a += step) out.push_back(a);
  return out;
}

struct RunSpec {
  std::string problem;
  Method method = Method::SqpEh;
  std::vector<double> alphas{1.0};
  double tol = 1e-7;
  int max_iter = 500;
  DirectionPath direction_path = DirectionPath::Explicit;
  std::string trace_path;    // empty: no file
  std::string summary_path;  // empty: no file
};

struct RunResult {
  std::string problem;
  Method method = Method::SqpEh;
  double alpha = 1.0;
  SolveReport report;
  std::optional<RateReport> rate;
};

inline RunResult run_single(const NlpProblem& problem, Method method, double alpha,
                            const RunSpec& spec) {
  validate_alpha_for(method, alpha);
  SolverConfig config;
  config.alpha = alpha;
  config.tol = spec.tol;
  config.max_iter = spec.max_iter;
  config.direction_path = spec.direction_path;
  RunResult result;
  result.problem = problem.name;
  result.method = method;
  result.alpha = alpha;
  result.report = solve(problem, strategy_for(method), config);
  if (result.report.status == SolveStatus::Converged) {
    try {
      result.rate = convergence_rate_estimate(result.report);
    } catch (const InsufficientData&) {
      result.rate = std::nullopt;
    }
  }
  return result;
}

namespace detail {

/// Full-precision decimal formatting so traces reproduce doubles exactly.
inline std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline void write_trace_csv(std::ostream& os, const SolveReport& report) {
  os << "iter,f1,constraint_norm,kkt_residual,step_norm,cbar\n";
  for (const auto& rec : report.trace) {
    os << rec.k << ',' << detail::g17(rec.f1) << ',' << detail::g17(rec.constraint_norm) << ','
       << detail::g17(rec.kkt_residual) << ',' << detail::g17(rec.step_norm) << ','
       << detail::g17(rec.cbar) << '\n';
  }
}

inline nlohmann::json summary_json(const RunResult& result) {
  const SolveReport& rep = result.report;
  nlohmann::json j;
  j["problem"] = result.problem;
  j["method"] = to_string(result.method);
  j["alpha"] = result.alpha;
  j["status"] = to_string(rep.status);
  j["iterations"] = rep.iterations;
  j["final_x"] = std::vector<double>(rep.final.x.begin(), rep.final.x.end());
  j["final_lambda"] = std::vector<double>(rep.final.lambda.begin(), rep.final.lambda.end());
  j["wall_time_ms"] = rep.wall_time.count() * 1e3;
  if (result.rate) {
    j["rate_estimate"] = {{"order", result.rate->order},
                          {"constant", result.rate->constant},
                          {"classification", to_string(result.rate->classification)},
                          {"pairs_used", result.rate->pairs_used}};
  } else {
    j["rate_estimate"] = nullptr;
  }
  return j;
}

namespace detail {

inline bool write_file(const std::string& path, const std::string& contents, std::ostream& err) {
  std::ofstream os(path);
  if (!os) {
    err << "error: cannot open '" << path << "' for writing\n";
    return false;
  }
  os << contents;
  return true;
}

}  // namespace detail

/// `run`: one solve; trace CSV and summary JSON on request. Exit 0 on
/// convergence, 2 on a clean non-converged outcome, 1 on errors.
inline int cmd_run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    if (spec.alphas.size() != 1) throw InvalidArgument("run takes a single --alpha value");
    const SuiteProblem suite = make_suite_problem(spec.problem);
    const RunResult result = run_single(suite.problem, spec.method, spec.alphas.front(), spec);
    const SolveReport& rep = result.report;

    if (!spec.trace_path.empty()) {
      std::ostringstream csv;
      write_trace_csv(csv, rep);
      if (!detail::write_file(spec.trace_path, csv.str(), err)) return 1;
    }
    if (!spec.summary_path.empty() &&
        !detail::write_file(spec.summary_path, summary_json(result).dump(2) + "\n", err))
      return 1;

    out << spec.problem << " " << to_string(spec.method) << " alpha=" << result.alpha << ": "
        << to_string(rep.status) << " in " << rep.iterations << " iterations, KKT residual "
        << detail::g17(rep.final_kkt_residual) << ", " << rep.wall_time.count() * 1e3 << " ms\n";
    if (rep.status == SolveStatus::Converged) {
      out << "x =";
      for (Index i = 0; i < rep.final.x.size(); ++i) out << ' ' << detail::g17(rep.final.x(i));
      out << '\n';
      return 0;
    }
    if (!rep.message.empty()) err << rep.message << '\n';
    return rep.status == SolveStatus::NumericalFailure ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

/// `sweep`: one solve per alpha in the grid; comparison table to stdout and,
/// via --trace, CSV. Exit 0 when at least one point converged.
inline int cmd_sweep(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    if (spec.alphas.empty()) throw InvalidArgument("sweep needs at least one alpha");
    const SuiteProblem suite = make_suite_problem(spec.problem);
    std::vector<RunResult> results;
    for (double alpha : spec.alphas)
      results.push_back(run_single(suite.problem, spec.method, alpha, spec));

    std::ostringstream csv;
    csv << "alpha,status,iterations,wall_time_ms\n";
    out << "alpha    status          iterations   time_ms\n";
    bool any_converged = false;
    nlohmann::json summaries = nlohmann::json::array();
    for (const auto& r : results) {
      any_converged |= r.report.status == SolveStatus::Converged;
      csv << detail::g17(r.alpha) << ',' << to_string(r.report.status) << ','
          << r.report.iterations << ',' << detail::g17(r.report.wall_time.count() * 1e3) << '\n';
      out << std::left << std::setw(9) << r.alpha << std::setw(16) << to_string(r.report.status)
          << std::setw(13) << r.report.iterations << r.report.wall_time.count() * 1e3 << '\n';
      summaries.push_back(summary_json(r));
    }
    if (!spec.trace_path.empty() && !detail::write_file(spec.trace_path, csv.str(), err)) return 1;
    if (!spec.summary_path.empty() &&
        !detail::write_file(spec.summary_path, summaries.dump(2) + "\n", err))
      return 1;
    return any_converged ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

/// `check`: finite-difference derivative verification at the initial point
/// and 20 deterministic points in the unit ball around it, plus the
/// reference-solution KKT residual. Exit 0 iff everything is within 1e-5.
inline int cmd_check(const std::string& problem_name, std::ostream& out, std::ostream& err,
                     double tol = 1e-5) {
  try {
    const SuiteProblem suite = make_suite_problem(problem_name);
    const NlpProblem& p = suite.problem;
    validate(p);

    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    DerivativeReport worst = check_derivatives(p, p.initial_point);
    for (int t = 0; t < 20; ++t) {
      Vector dir(p.n);
      for (Index i = 0; i < p.n; ++i) dir(i) = gauss(rng);
      dir *= unif(rng) / dir.norm();
      const DerivativeReport r = check_derivatives(p, p.initial_point + dir);
      worst.objective_gradient_error = std::max(worst.objective_gradient_error, r.objective_gradient_error);
      worst.constraint_jacobian_error = std::max(worst.constraint_jacobian_error, r.constraint_jacobian_error);
      if (r.residual_jacobian_error)
        worst.residual_jacobian_error =
            std::max(worst.residual_jacobian_error.value_or(0.0), *r.residual_jacobian_error);
      if (r.residual_identity_error)
        worst.residual_identity_error =
            std::max(worst.residual_identity_error.value_or(0.0), *r.residual_identity_error);
    }

    Vector lambda_star = suite.reference.lambda_star.size() > 0
                             ? suite.reference.lambda_star
                             : least_squares_multipliers(p, suite.reference.x_star);
    const double ref_residual = kkt_residual(evaluate(p, suite.reference.x_star), lambda_star);

    out << "problem " << p.name << ": n=" << p.n << " m=" << p.m << '\n';
    out << "  objective_gradient   max rel err " << worst.objective_gradient_error << '\n';
    out << "  constraint_jacobian  max rel err " << worst.constraint_jacobian_error << '\n';
    if (worst.residual_jacobian_error)
      out << "  residual_jacobian    max rel err " << *worst.residual_jacobian_error << '\n';
    if (worst.residual_identity_error)
      out << "  residual_identity    max rel err " << *worst.residual_identity_error << '\n';
    out << "  reference KKT residual " << ref_residual << '\n';

    const bool ok = worst.within(tol) && ref_residual <= tol;
    out << (ok ? "  OK" : "  FAILED") << '\n';
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

inline int cmd_list(std::ostream& out) {
  for (const auto& name : suite_names()) {
    const SuiteProblem s = make_suite_problem(name);
    out << name << "  n=" << s.problem.n << " m=" << s.problem.m << '\n';
  }
  return 0;
}

}  // namespace isqp
