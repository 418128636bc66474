#pragma once

// Problem-definition contract for equality-constrained NLPs
//
//   minimize f1(x)  subject to  f2(x) = 0,   f2: R^n -> R^m,  m < n,
//
// plus the cached per-point evaluation bundle and the KKT residual that the
// solver uses as its convergence measure.

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "isqp/errors.hpp"
#include "isqp/types.hpp"

namespace isqp {

/// Definition of one equality-constrained NLP. Derivatives are analytic
/// callbacks; finite differences are only ever a checker, never a solver
/// input. Callbacks must be pure and reentrant.
struct NlpProblem {
  std::string name;
  Index n = 0;  ///< number of variables
  Index m = 0;  ///< number of equality constraints, m < n

  std::function<double(const Vector&)> objective;               // f1
  std::function<Vector(const Vector&)> constraints;             // f2, length m
  std::function<RowVector(const Vector&)> objective_gradient;   // 1 x n
  std::function<Matrix(const Vector&)> constraint_jacobian;     // m x n

  /// Optional exact Hessian of the Lagrangian f1(x) + lambda'f2(x).
  std::function<Matrix(const Vector&, const Vector&)> lagrangian_hessian;

  /// Optional least-squares structure: f1(x) = residual_scale * ||r(x)||^2.
  std::function<Vector(const Vector&)> residual;
  std::function<Matrix(const Vector&)> residual_jacobian;  // p x n
  double residual_scale = 0.5;

  Vector initial_point;
  Vector initial_multipliers;  ///< empty means zeros(m)

  bool has_exact_hessian() const { return static_cast<bool>(lagrangian_hessian); }
  bool has_residual() const { return static_cast<bool>(residual) && static_cast<bool>(residual_jacobian); }
};

/// Primal-dual pair carried between iterations.
struct Iterate {
  Vector x;
  Vector lambda;
};

/// All four first-order quantities evaluated coherently at one point.
struct EvalBundle {
  double f1 = 0.0;
  Vector f2;
  RowVector j1;
  Matrix j2;
};

inline Vector initial_multipliers_or_zero(const NlpProblem& p) {
  return p.initial_multipliers.size() == 0 ? Vector(Vector::Zero(p.m)) : p.initial_multipliers;
}

/// Sanity-checks the static parts of a problem definition.
inline void validate(const NlpProblem& p) {
  if (p.n < 2 || p.m < 1 || p.m >= p.n)
    throw InvalidArgument("NlpProblem '" + p.name + "': need 1 <= m < n");
  if (!p.objective || !p.constraints || !p.objective_gradient || !p.constraint_jacobian)
    throw InvalidArgument("NlpProblem '" + p.name + "': value and Jacobian callbacks are required");
  if (p.initial_point.size() != p.n)
    throw InvalidArgument("NlpProblem '" + p.name + "': initial point has wrong length");
  if (p.initial_multipliers.size() != 0 && p.initial_multipliers.size() != p.m)
    throw InvalidArgument("NlpProblem '" + p.name + "': initial multipliers have wrong length");
  if (static_cast<bool>(p.residual) != static_cast<bool>(p.residual_jacobian))
    throw InvalidArgument("NlpProblem '" + p.name + "': residual and residual_jacobian must come together");
}

/// Evaluates f1, f2, J1, J2 at x. Deterministic: equal x gives equal bundles.
inline EvalBundle evaluate(const NlpProblem& p, const Vector& x) {
  if (x.size() != p.n) throw InvalidArgument("evaluate: point has wrong length");
  EvalBundle b;
  b.f1 = p.objective(x);
  b.f2 = p.constraints(x);
  b.j1 = p.objective_gradient(x);
  b.j2 = p.constraint_jacobian(x);
  if (b.f2.size() != p.m || b.j1.size() != p.n || b.j2.rows() != p.m || b.j2.cols() != p.n)
    throw EvaluationFailure("evaluate: '" + p.name + "' callback returned wrong shape");
  if (!std::isfinite(b.f1) || !b.f2.allFinite() || !b.j1.allFinite() || !b.j2.allFinite())
    throw EvaluationFailure("evaluate: '" + p.name + "' produced NaN/Inf");
  return b;
}

/// 2-norm of the stacked first-order optimality vector
/// (J1' + J2' lambda ; f2). Zero exactly at KKT points.
inline double kkt_residual(const EvalBundle& b, const Vector& lambda) {
  if (lambda.size() != b.f2.size()) throw InvalidArgument("kkt_residual: multiplier length mismatch");
  const Vector stationarity = b.j1.transpose() + b.j2.transpose() * lambda;
  return std::sqrt(stationarity.squaredNorm() + b.f2.squaredNorm());
}

}  // namespace isqp
