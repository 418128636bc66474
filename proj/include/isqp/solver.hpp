#pragma once

// The iteration loop x_{k+1} = x_k + dx_k with multipliers carried from the
// QP solve, plus a convergence-rate estimator for the recorded residual
// trace.

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "isqp/errors.hpp"
#include "isqp/hessian.hpp"
#include "isqp/problem.hpp"
#include "isqp/step.hpp"
#include "isqp/types.hpp"

namespace isqp {

enum class SolveStatus { Converged, MaxIterations, Diverged, NumericalFailure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::Diverged: return "Diverged";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

/// One row per step taken. kkt_residual and constraint_norm are measured at
/// the iterate the step starts from; the defect fields are diagnostics for
/// the step itself.
struct IterationRecord {
  int k = 0;
  double f1 = 0.0;
  double constraint_norm = 0.0;
  double kkt_residual = 0.0;
  double step_norm = 0.0;
  double cbar = 0.0;
  /// ||B_k - B_{k-1}|| / ||x_k - x_{k-1}||; 0 for the first iteration.
  double hessian_lipschitz_ratio = 0.0;
  double feasibility_defect = 0.0;    ///< ||J2 dx + f2||
  double interpolation_defect = 0.0;  ///< ||dx - (alpha dx_sqp + (1-alpha) dx_f)||
};

struct SolveReport {
  SolveStatus status = SolveStatus::NumericalFailure;
  int iterations = 0;  ///< number of steps taken (x-updates)
  Iterate final;
  double final_kkt_residual = std::numeric_limits<double>::quiet_NaN();
  std::vector<IterationRecord> trace;   ///< one record per step taken
  std::vector<Iterate> iterate_history; ///< filled when config.record_iterates
  std::chrono::duration<double> wall_time{0.0};
  std::string message;
};

/// Runs the interpolated-SQP iteration until the KKT residual drops to
/// config.tol, the iteration budget runs out, or the residual exceeds the
/// divergence threshold. Kernel errors become status NumericalFailure with
/// the failing iteration recorded in the message.
inline SolveReport solve(const NlpProblem& problem, const HessianStrategy& strategy,
                         const SolverConfig& config) {
  validate(problem);
  detail::check_alpha(config.alpha);
  if (!(config.tol > 0.0)) throw InvalidArgument("solve: tol must be positive");
  if (config.max_iter < 0) throw InvalidArgument("solve: max_iter must be nonnegative");

  const auto t_start = std::chrono::steady_clock::now();
  SolveReport report;
  Vector x = problem.initial_point;
  Vector lambda = initial_multipliers_or_zero(problem);

  Matrix b_prev;
  Vector x_prev;
  bool have_prev = false;

  for (int k = 0;; ++k) {
    try {
      if (!x.allFinite() || !lambda.allFinite()) {
        report.status = SolveStatus::Diverged;
        break;
      }
      if (config.record_iterates) report.iterate_history.push_back({x, lambda});

      const EvalBundle bundle = evaluate(problem, x);
      const double residual = kkt_residual(bundle, lambda);
      report.final_kkt_residual = residual;
      if (residual <= config.tol) {
        report.status = SolveStatus::Converged;
        break;
      }
      if (!std::isfinite(residual) || residual > config.divergence_threshold) {
        report.status = SolveStatus::Diverged;
        break;
      }
      if (k >= config.max_iter) {
        report.status = SolveStatus::MaxIterations;
        break;
      }

      const Matrix b = build_hessian(strategy, problem, {x, lambda});
      const RegularizedHessian reg = regularize(b, bundle.j2, config.cbar_policy);
      const StepComponents step = interpolated_step(bundle, reg, config);

      IterationRecord rec;
      rec.k = k;
      rec.f1 = bundle.f1;
      rec.constraint_norm = bundle.f2.norm();
      rec.kkt_residual = residual;
      rec.step_norm = step.dx.norm();
      rec.cbar = reg.cbar;
      if (have_prev) {
        const double dist = (x - x_prev).norm();
        rec.hessian_lipschitz_ratio = dist > 0.0 ? spectral_norm(b - b_prev) / dist : 0.0;
      }
      rec.feasibility_defect = (bundle.j2 * step.dx + bundle.f2).norm();
      rec.interpolation_defect =
          (step.dx - (config.alpha * step.dx_sqp + (1.0 - config.alpha) * step.dx_feasible)).norm();
      report.trace.push_back(rec);

      x_prev = x;
      b_prev = b;
      have_prev = true;
      x += step.dx;
      lambda = step.lambda_next;
    } catch (const Error& e) {
      report.status = SolveStatus::NumericalFailure;
      report.message = "iteration " + std::to_string(k) + ": " + e.what();
      break;
    }
  }

  report.iterations = static_cast<int>(report.trace.size());
  report.final = {std::move(x), std::move(lambda)};
  report.wall_time = std::chrono::steady_clock::now() - t_start;
  return report;
}

enum class RateClass { Linear, Superlinear, Quadratic };

inline const char* to_string(RateClass c) {
  switch (c) {
    case RateClass::Linear: return "linear";
    case RateClass::Superlinear: return "superlinear";
    case RateClass::Quadratic: return "quadratic";
  }
  return "?";
}

/// Least-squares fit of log r_{k+1} against log r_k over the tail of a
/// residual sequence: order is the slope, the contraction constant the
/// exponential of the intercept (so r_{k+1} ~ constant * r_k^order).
struct RateReport {
  double order = 0.0;
  double constant = 0.0;
  RateClass classification = RateClass::Linear;
  int pairs_used = 0;
};

inline RateReport estimate_rate(const std::vector<double>& residuals) {
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
    const double a = residuals[i];
    const double b = residuals[i + 1];
    if (a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b))
      pairs.emplace_back(std::log(a), std::log(b));
  }
  if (pairs.size() < 4)
    throw InsufficientData("estimate_rate: need at least 4 positive successive residual pairs");

  const std::size_t tail = std::min<std::size_t>(pairs.size(), 5);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = pairs.size() - tail; i < pairs.size(); ++i) {
    sx += pairs[i].first;
    sy += pairs[i].second;
    sxx += pairs[i].first * pairs[i].first;
    sxy += pairs[i].first * pairs[i].second;
  }
  const double nn = static_cast<double>(tail);
  const double denom = nn * sxx - sx * sx;
  if (std::abs(denom) < 1e-30)
    throw InsufficientData("estimate_rate: residual tail is degenerate");

  RateReport r;
  r.order = (nn * sxy - sx * sy) / denom;
  r.constant = std::exp((sy - r.order * sx) / nn);
  r.pairs_used = static_cast<int>(tail);
  r.classification = r.order >= 1.7    ? RateClass::Quadratic
                     : r.order > 1.15 ? RateClass::Superlinear
                                      : RateClass::Linear;
  return r;
}

/// Rate estimate over a report's KKT-residual history (trace rows plus the
/// final residual).
inline RateReport convergence_rate_estimate(const SolveReport& report) {
  std::vector<double> residuals;
  residuals.reserve(report.trace.size() + 1);
  for (const auto& rec : report.trace) residuals.push_back(rec.kkt_residual);
  if (std::isfinite(report.final_kkt_residual)) residuals.push_back(report.final_kkt_residual);
  return estimate_rate(residuals);
}

}  // namespace isqp
