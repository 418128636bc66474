#pragma once

// Search directions. The SQP direction solves the QP subproblem's KKT system
//
//   [B J2'; J2 0] [dx; lambda] = -[J1'; f2],
//
// either in the explicit projected form through C = B + cbar*J2'J2 or by a
// direct solve of the assembled saddle matrix. The interpolated update blends
// it with a feasible direction:
//
//   dx = alpha*dx_sqp + (1 - alpha)*dx_feasible = -alpha*G - T*f2,
//
// where T is the Moore-Penrose right inverse of J2 and
// G = (I - T^C J2) C^-1 J1'. Both forms keep the linearized constraints
// exact: J2*dx + f2 = 0 for every alpha.

#include <utility>

#include "isqp/errors.hpp"
#include "isqp/hessian.hpp"
#include "isqp/linalg.hpp"
#include "isqp/problem.hpp"
#include "isqp/types.hpp"

namespace isqp {

enum class DirectionPath { Explicit, SaddleSolve };

struct SolverConfig {
  double alpha = 1.0;  ///< interpolation coefficient in (0, 1]; 1 is pure SQP
  double tol = 1e-7;   ///< KKT residual threshold
  int max_iter = 500;
  double divergence_threshold = 1e10;
  DirectionPath direction_path = DirectionPath::Explicit;
  CbarPolicy cbar_policy;
  bool record_iterates = false;  ///< keep the full (x, lambda) history in the report
};

/// Everything computed for one step.
struct StepComponents {
  Vector dx_sqp;       ///< QP solution direction
  Vector dx_feasible;  ///< constraint-restoration direction
  Vector dx;           ///< interpolated update actually taken
  Vector lambda_next;  ///< QP multiplier
  double alpha = 1.0;
  Vector g_term;  ///< G = (I - T^C J2) C^-1 J1', the reduced-gradient term
};

namespace detail {

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
}

}  // namespace detail

/// QP subproblem solution (dx_sqp, lambda_next). The Explicit path eliminates
/// through C and recovers the multiplier from the shifted Schur solve,
/// lambda = mu - cbar*f2; the SaddleSolve path factors the indefinite system
/// as assembled. Both agree to rounding.
inline std::pair<Vector, Vector> sqp_direction(const EvalBundle& bundle,
                                               const RegularizedHessian& reg,
                                               DirectionPath path = DirectionPath::Explicit) {
  if (path == DirectionPath::SaddleSolve)
    return solve_saddle_direct(reg.b, bundle.j2, bundle.j1.transpose(), bundle.f2);
  auto wi = detail::weighted_right_inverse_with_d(reg.c_factor, bundle.j2);
  const Vector cinv_g = reg.c_factor.solve(Vector(bundle.j1.transpose()));
  const Vector g_term = cinv_g - wi.t * (bundle.j2 * cinv_g);
  Vector mu = wi.d.solve(Vector(bundle.f2 - bundle.j2 * cinv_g));
  Vector dx = -g_term - wi.t * bundle.f2;
  Vector lambda_next = mu - reg.cbar * bundle.f2;
  return {std::move(dx), std::move(lambda_next)};
}

/// Feasible direction solving the linearized constraints J2*dx + f2 = 0.
/// For alpha < 1 it is chosen so the T^C f2 term cancels out of the
/// interpolated update:
///   dx_f = -( 1/(1-alpha) * T - alpha/(1-alpha) * T^C ) f2.
/// For alpha = 1 the feasible direction is unused; -T f2 is returned.
inline Vector feasible_direction(const EvalBundle& bundle, const Matrix& t_weighted,
                                 const Matrix& t_mp, double alpha) {
  detail::check_alpha(alpha);
  if (alpha == 1.0) return -t_mp * bundle.f2;
  const double s = 1.0 / (1.0 - alpha);
  return -(s * (t_mp * bundle.f2) - alpha * s * (t_weighted * bundle.f2));
}

/// Full step bundle at one iterate.
inline StepComponents interpolated_step(const EvalBundle& bundle, const RegularizedHessian& reg,
                                        const SolverConfig& config) {
  detail::check_alpha(config.alpha);
  const double alpha = config.alpha;

  auto wi = detail::weighted_right_inverse_with_d(reg.c_factor, bundle.j2);
  const Matrix t_mp = moore_penrose_right_inverse(bundle.j2);
  const Vector cinv_g = reg.c_factor.solve(Vector(bundle.j1.transpose()));

  StepComponents out;
  out.alpha = alpha;
  out.g_term = cinv_g - wi.t * (bundle.j2 * cinv_g);

  if (config.direction_path == DirectionPath::Explicit) {
    Vector mu = wi.d.solve(Vector(bundle.f2 - bundle.j2 * cinv_g));
    out.dx_sqp = -out.g_term - wi.t * bundle.f2;
    out.lambda_next = mu - reg.cbar * bundle.f2;
  } else {
    std::tie(out.dx_sqp, out.lambda_next) =
        solve_saddle_direct(reg.b, bundle.j2, bundle.j1.transpose(), bundle.f2);
  }

  out.dx_feasible = feasible_direction(bundle, wi.t, t_mp, alpha);

  if (alpha == 1.0) {
    out.dx = out.dx_sqp;
  } else if (config.direction_path == DirectionPath::Explicit) {
    out.dx = -alpha * out.g_term - t_mp * bundle.f2;
  } else {
    out.dx = alpha * out.dx_sqp + (1.0 - alpha) * out.dx_feasible;
  }
  return out;
}

}  // namespace isqp
