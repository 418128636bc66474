#pragma once

// Built-in test problems with analytic derivatives and reference solutions.
//
//   hs77     five-variable nonlinear least-squares objective with two
//            nonlinear equality constraints and nonzero residual at the
//            solution (Hock-Schittkowski no. 77)
//   p_lin    min 0.5||x||^2 s.t. x1 + x2 = 2 (linear constraint case)
//   p_circle min (x1-2)^2 + x2^2 s.t. x1^2 + x2^2 = 1 (nonlinear constraint)

#include <cmath>
#include <string>
#include <vector>

#include "isqp/errors.hpp"
#include "isqp/linalg.hpp"
#include "isqp/problem.hpp"
#include "isqp/types.hpp"

namespace isqp {

/// Known solution of a suite problem. lambda_star of size 0 means "recover by
/// least squares from the stationarity condition at x_star".
struct ReferenceSolution {
  Vector x_star;
  Vector lambda_star;
  std::string source;
};

struct SuiteProblem {
  NlpProblem problem;
  ReferenceSolution reference;
};

/// Multipliers minimizing ||J1' + J2' lambda|| at x (normal equations).
inline Vector least_squares_multipliers(const NlpProblem& p, const Vector& x) {
  const Matrix j2 = p.constraint_jacobian(x);
  const Vector g = p.objective_gradient(x).transpose();
  SpdFactorization f = factorize_spd(0.5 * ((j2 * j2.transpose()) +
                                            (j2 * j2.transpose()).transpose()));
  return f.solve(Vector(-(j2 * g)));
}

inline SuiteProblem hs77() {
  const double rt2 = std::sqrt(2.0);
  NlpProblem p;
  p.name = "hs77";
  p.n = 5;
  p.m = 2;
  p.objective = [](const Vector& x) {
    return std::pow(x(0) - 1, 2) + std::pow(x(0) - x(1), 2) + std::pow(x(2) - 1, 2) +
           std::pow(x(3) - 1, 4) + std::pow(x(4) - 1, 6);
  };
  p.objective_gradient = [](const Vector& x) {
    RowVector g(5);
    g << 2 * (x(0) - 1) + 2 * (x(0) - x(1)), -2 * (x(0) - x(1)), 2 * (x(2) - 1),
        4 * std::pow(x(3) - 1, 3), 6 * std::pow(x(4) - 1, 5);
    return g;
  };
  p.constraints = [rt2](const Vector& x) {
    Vector c(2);
    c << x(0) * x(0) * x(3) + std::sin(x(3) - x(4)) - 2 * rt2,
        x(1) + std::pow(x(2), 4) * x(3) * x(3) - 8 - rt2;
    return c;
  };
  p.constraint_jacobian = [](const Vector& x) {
    const double c = std::cos(x(3) - x(4));
    Matrix j(2, 5);
    j << 2 * x(0) * x(3), 0, 0, x(0) * x(0) + c, -c,
        0, 1, 4 * std::pow(x(2), 3) * x(3) * x(3), 2 * std::pow(x(2), 4) * x(3), 0;
    return j;
  };
  p.lagrangian_hessian = [](const Vector& x, const Vector& lam) {
    const double s = std::sin(x(3) - x(4));
    Matrix h = Matrix::Zero(5, 5);
    h(0, 0) = 4;
    h(0, 1) = h(1, 0) = -2;
    h(1, 1) = 2;
    h(2, 2) = 2;
    h(3, 3) = 12 * std::pow(x(3) - 1, 2);
    h(4, 4) = 30 * std::pow(x(4) - 1, 4);
    // constraint 1: x1^2 x4 + sin(x4 - x5)
    h(0, 0) += lam(0) * 2 * x(3);
    h(0, 3) += lam(0) * 2 * x(0);
    h(3, 0) += lam(0) * 2 * x(0);
    h(3, 3) += lam(0) * -s;
    h(3, 4) += lam(0) * s;
    h(4, 3) += lam(0) * s;
    h(4, 4) += lam(0) * -s;
    // constraint 2: x2 + x3^4 x4^2
    h(2, 2) += lam(1) * 12 * x(2) * x(2) * x(3) * x(3);
    h(2, 3) += lam(1) * 8 * std::pow(x(2), 3) * x(3);
    h(3, 2) += lam(1) * 8 * std::pow(x(2), 3) * x(3);
    h(3, 3) += lam(1) * 2 * std::pow(x(2), 4);
    return h;
  };
  // Term-by-term decomposition of the objective as a plain sum of squares,
  // f1 = ||r||^2. Its Gauss-Newton matrix Jr'Jr is what the reference
  // experiment uses as the (deliberately poor) GGN approximation.
  p.residual = [](const Vector& x) {
    Vector r(5);
    r << x(0) - 1, x(0) - x(1), x(2) - 1, std::pow(x(3) - 1, 2), std::pow(x(4) - 1, 3);
    return r;
  };
  p.residual_jacobian = [](const Vector& x) {
    Matrix j = Matrix::Zero(5, 5);
    j(0, 0) = 1;
    j(1, 0) = 1;
    j(1, 1) = -1;
    j(2, 2) = 1;
    j(3, 3) = 2 * (x(3) - 1);
    j(4, 4) = 3 * std::pow(x(4) - 1, 2);
    return j;
  };
  p.residual_scale = 1.0;
  p.initial_point = Vector::Constant(5, 2.0);
  p.initial_multipliers = Vector::Zero(2);

  ReferenceSolution ref;
  ref.x_star = Vector(5);
  ref.x_star << 1.166172, 1.182111, 1.380257, 1.506036, 0.610920;
  ref.lambda_star = least_squares_multipliers(p, ref.x_star);
  ref.source = "published solution of Hock-Schittkowski problem 77; multipliers fit by least squares";
  return {std::move(p), std::move(ref)};
}

inline SuiteProblem p_lin() {
  NlpProblem p;
  p.name = "p_lin";
  p.n = 2;
  p.m = 1;
  p.objective = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  p.objective_gradient = [](const Vector& x) { return RowVector(x.transpose()); };
  p.constraints = [](const Vector& x) { return Vector::Constant(1, x(0) + x(1) - 2.0).eval(); };
  p.constraint_jacobian = [](const Vector&) {
    Matrix j(1, 2);
    j << 1, 1;
    return j;
  };
  p.lagrangian_hessian = [](const Vector&, const Vector&) { return Matrix::Identity(2, 2).eval(); };
  p.residual = [](const Vector& x) { return x; };
  p.residual_jacobian = [](const Vector&) { return Matrix::Identity(2, 2).eval(); };
  p.residual_scale = 0.5;
  p.initial_point = Vector::Zero(2);
  p.initial_multipliers = Vector::Zero(1);

  ReferenceSolution ref;
  ref.x_star = Vector::Constant(2, 1.0);
  ref.lambda_star = Vector::Constant(1, -1.0);
  ref.source = "analytic KKT solution";
  return {std::move(p), std::move(ref)};
}

inline SuiteProblem p_circle() {
  const double rt2 = std::sqrt(2.0);
  NlpProblem p;
  p.name = "p_circle";
  p.n = 2;
  p.m = 1;
  p.objective = [](const Vector& x) { return std::pow(x(0) - 2, 2) + x(1) * x(1); };
  p.objective_gradient = [](const Vector& x) {
    RowVector g(2);
    g << 2 * (x(0) - 2), 2 * x(1);
    return g;
  };
  p.constraints = [](const Vector& x) {
    return Vector::Constant(1, x(0) * x(0) + x(1) * x(1) - 1.0).eval();
  };
  p.constraint_jacobian = [](const Vector& x) {
    Matrix j(1, 2);
    j << 2 * x(0), 2 * x(1);
    return j;
  };
  p.lagrangian_hessian = [](const Vector&, const Vector& lam) {
    return Matrix((2 + 2 * lam(0)) * Matrix::Identity(2, 2));
  };
  p.residual = [rt2](const Vector& x) {
    Vector r(2);
    r << rt2 * (x(0) - 2), rt2 * x(1);
    return r;
  };
  p.residual_jacobian = [rt2](const Vector&) { return Matrix(rt2 * Matrix::Identity(2, 2)); };
  p.residual_scale = 0.5;
  p.initial_point = Vector(2);
  p.initial_point << 0.6, 0.8;  // feasible start near the solution basin
  p.initial_multipliers = Vector::Zero(1);

  ReferenceSolution ref;
  ref.x_star = Vector(2);
  ref.x_star << 1.0, 0.0;
  ref.lambda_star = Vector::Constant(1, 1.0);
  ref.source = "analytic KKT solution";
  return {std::move(p), std::move(ref)};
}

inline std::vector<std::string> suite_names() { return {"hs77", "p_lin", "p_circle"}; }

inline SuiteProblem make_suite_problem(const std::string& name) {
  if (name == "hs77") return hs77();
  if (name == "p_lin") return p_lin();
  if (name == "p_circle") return p_circle();
  throw InvalidArgument("unknown problem '" + name + "'");
}

}  // namespace isqp
