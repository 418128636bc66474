#pragma once

// Per-iteration Hessian matrices B and their regularization into a positive
// definite C = B + cbar*J2'J2. B only has to be positive definite on the
// null space of J2; cbar is escalated until the Cholesky factorization of C
// succeeds, fresh at every iteration.

#include <utility>

#include "isqp/errors.hpp"
#include "isqp/linalg.hpp"
#include "isqp/problem.hpp"
#include "isqp/types.hpp"

namespace isqp {

enum class HessianKind { Exact, GGN, Identity, Constant };

struct HessianStrategy {
  HessianKind kind = HessianKind::Identity;
  Matrix constant_matrix;  ///< used by Constant only; must be symmetric n x n

  static HessianStrategy exact() { return {HessianKind::Exact, {}}; }
  static HessianStrategy ggn() { return {HessianKind::GGN, {}}; }
  static HessianStrategy identity() { return {HessianKind::Identity, {}}; }
  static HessianStrategy constant(Matrix m) { return {HessianKind::Constant, std::move(m)}; }
};

inline const char* to_string(HessianKind k) {
  switch (k) {
    case HessianKind::Exact: return "Exact";
    case HessianKind::GGN: return "GGN";
    case HessianKind::Identity: return "Identity";
    case HessianKind::Constant: return "Constant";
  }
  return "?";
}

/// Builds B at the given iterate:
///   Exact    -> Lagrangian Hessian at (x, lambda)
///   GGN      -> Jr(x)' Jr(x) from the residual Jacobian (PSD by construction)
///   Identity -> I_n
///   Constant -> the stored matrix
inline Matrix build_hessian(const HessianStrategy& strategy, const NlpProblem& p, const Iterate& it) {
  switch (strategy.kind) {
    case HessianKind::Exact: {
      if (!p.has_exact_hessian())
        throw MissingHook("build_hessian: '" + p.name + "' has no exact Lagrangian Hessian");
      Matrix h = p.lagrangian_hessian(it.x, it.lambda);
      if (h.rows() != p.n || h.cols() != p.n)
        throw EvaluationFailure("build_hessian: exact Hessian has wrong shape");
      return h;
    }
    case HessianKind::GGN: {
      if (!p.has_residual())
        throw MissingHook("build_hessian: '" + p.name + "' has no residual decomposition");
      const Matrix jr = p.residual_jacobian(it.x);
      if (jr.cols() != p.n) throw EvaluationFailure("build_hessian: residual Jacobian has wrong shape");
      return jr.transpose() * jr;
    }
    case HessianKind::Identity:
      return Matrix::Identity(p.n, p.n);
    case HessianKind::Constant: {
      const Matrix& c = strategy.constant_matrix;
      if (c.rows() != p.n || c.cols() != p.n)
        throw InvalidArgument("build_hessian: constant matrix has wrong shape");
      if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff()))
        throw InvalidArgument("build_hessian: constant matrix is not symmetric");
      return c;
    }
  }
  throw InvalidArgument("build_hessian: unknown strategy");
}

/// B together with the smallest scheduled cbar that made C = B + cbar*J2'J2
/// factorizable, and that factorization.
struct RegularizedHessian {
  Matrix b;
  double cbar = 0.0;
  SpdFactorization c_factor;
};

inline RegularizedHessian regularize(const Matrix& b, const Matrix& j2, const CbarPolicy& policy = {}) {
  if (b.rows() != b.cols() || j2.cols() != b.rows())
    throw InvalidArgument("regularize: dimension mismatch");
  detail::ensure_finite(b, "regularize B");
  detail::ensure_finite(j2, "regularize J2");
  auto esc = detail::escalate_cbar(b, j2, policy);
  if (!esc)
    throw RegularizationFailed(
        "regularize: no cbar <= cap makes B + cbar*J2'J2 positive definite "
        "(B is not positive definite on the null space of J2)");
  return {b, esc->first, std::move(esc->second)};
}

}  // namespace isqp
