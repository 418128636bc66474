#pragma once

// Central finite-difference verification of a problem's analytic derivatives,
// plus the least-squares identity f1 = scale*||r||^2 when residual hooks
// exist. A checker only: the solver itself never touches finite differences.

#include <algorithm>
#include <cmath>
#include <optional>

#include "isqp/errors.hpp"
#include "isqp/problem.hpp"
#include "isqp/types.hpp"

namespace isqp {

/// Maximum relative errors per derivative block, with
/// rel(a, b) = |a - b| / max(1, |a|, |b|).
struct DerivativeReport {
  double step = 0.0;
  double objective_gradient_error = 0.0;
  double constraint_jacobian_error = 0.0;
  std::optional<double> residual_jacobian_error;
  std::optional<double> residual_identity_error;

  double max_error() const {
    double e = std::max(objective_gradient_error, constraint_jacobian_error);
    if (residual_jacobian_error) e = std::max(e, *residual_jacobian_error);
    if (residual_identity_error) e = std::max(e, *residual_identity_error);
    return e;
  }
  bool within(double tol) const { return max_error() <= tol; }
};

namespace detail {

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

template <typename F>
double max_jacobian_error(const F& value, const Matrix& analytic, const Vector& x, double h) {
  double worst = 0.0;
  Vector xp = x, xm = x;
  for (Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    const Vector fd = (value(xp) - value(xm)) / (2.0 * h);
    if (!fd.allFinite()) throw EvaluationFailure("check_derivatives: NaN/Inf while differencing");
    for (Index r = 0; r < fd.size(); ++r) worst = std::max(worst, rel_err(fd(r), analytic(r, i)));
    xp(i) = x(i);
    xm(i) = x(i);
  }
  return worst;
}

}  // namespace detail

inline DerivativeReport check_derivatives(const NlpProblem& p, const Vector& x, double step = 1e-6) {
  if (step <= 0.0) throw InvalidArgument("check_derivatives: step must be positive");
  if (x.size() != p.n) throw InvalidArgument("check_derivatives: point has wrong length");

  DerivativeReport report;
  report.step = step;

  const auto scalar_as_vector = [&](const Vector& y) { return Vector::Constant(1, p.objective(y)).eval(); };
  report.objective_gradient_error =
      detail::max_jacobian_error(scalar_as_vector, Matrix(p.objective_gradient(x)), x, step);
  report.constraint_jacobian_error =
      detail::max_jacobian_error([&](const Vector& y) { return p.constraints(y); },
                                 p.constraint_jacobian(x), x, step);

  if (p.has_residual()) {
    report.residual_jacobian_error =
        detail::max_jacobian_error([&](const Vector& y) { return p.residual(y); },
                                   p.residual_jacobian(x), x, step);
    report.residual_identity_error =
        detail::rel_err(p.residual_scale * p.residual(x).squaredNorm(), p.objective(x));
  }
  return report;
}

}  // namespace isqp
