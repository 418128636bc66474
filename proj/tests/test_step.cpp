#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "isqp/problems.hpp"
#include "isqp/step.hpp"
#include "test_support.hpp"

using namespace isqp;
using isqp::testing::random_full_row_rank;
using isqp::testing::random_spd;
using isqp::testing::random_vector;

namespace {

EvalBundle bundle_at(const NlpProblem& p, const Vector& x) { return evaluate(p, x); }

SolverConfig config_with(double alpha, DirectionPath path = DirectionPath::Explicit) {
  SolverConfig c;
  c.alpha = alpha;
  c.direction_path = path;
  return c;
}

}  // namespace

TEST_CASE("sqp_direction on p_lin at the origin") {
  const auto [p, ref] = p_lin();
  const EvalBundle b = bundle_at(p, Vector::Zero(2));
  const RegularizedHessian reg = regularize(Matrix::Identity(2, 2), b.j2);
  for (DirectionPath path : {DirectionPath::Explicit, DirectionPath::SaddleSolve}) {
    const auto [dx, lam] = sqp_direction(b, reg, path);
    CHECK(std::abs(dx(0) - 1.0) < 1e-12);
    CHECK(std::abs(dx(1) - 1.0) < 1e-12);
    CHECK(std::abs(lam(0) + 1.0) < 1e-12);
  }
}

TEST_CASE("sqp_direction vanishes at KKT pairs") {
  for (const auto& make : {p_lin, p_circle}) {
    const auto [p, ref] = make();
    const EvalBundle b = bundle_at(p, ref.x_star);
    const RegularizedHessian reg =
        regularize(build_hessian(HessianStrategy::exact(), p, {ref.x_star, ref.lambda_star}), b.j2);
    const auto [dx, lam] = sqp_direction(b, reg);
    CHECK(dx.norm() < 1e-9);
  }
}

TEST_CASE("sqp_direction at a feasible p_lin point is the null-space step") {
  const auto [p, ref] = p_lin();
  Vector x(2);
  x << 2, 0;
  const EvalBundle b = bundle_at(p, x);
  const RegularizedHessian reg = regularize(Matrix::Identity(2, 2), b.j2);
  const auto [dx, lam] = sqp_direction(b, reg);
  CHECK(std::abs(dx(0) + 1.0) < 1e-12);
  CHECK(std::abs(dx(1) - 1.0) < 1e-12);
}

TEST_CASE("feasible_direction frozen cases") {
  Matrix j2(1, 2);
  j2 << 1, 1;
  EvalBundle b;
  b.f1 = 0.0;
  b.j1 = RowVector::Zero(2);
  b.j2 = j2;
  const Matrix t_mp = moore_penrose_right_inverse(j2);

  SECTION("zero constraint violation gives a zero direction") {
    b.f2 = Vector::Zero(1);
    const Matrix t_c = weighted_right_inverse(factorize_spd(Matrix::Identity(2, 2)), j2);
    for (double alpha : {0.25, 0.5, 0.9, 1.0})
      CHECK(feasible_direction(b, t_c, t_mp, alpha).norm() == 0.0);
  }
  SECTION("coinciding inverses collapse the interpolation") {
    b.f2 = Vector::Constant(1, -2.0);
    const Matrix t_c = weighted_right_inverse(factorize_spd(Matrix::Identity(2, 2)), j2);
    for (double alpha : {0.25, 0.5, 0.9}) {
      const Vector df = feasible_direction(b, t_c, t_mp, alpha);
      CHECK(std::abs(df(0) - 1.0) < 1e-12);
      CHECK(std::abs(df(1) - 1.0) < 1e-12);
    }
  }
  SECTION("weighted case C = diag(1,4), alpha = 0.5") {
    b.f2 = Vector::Constant(1, -2.0);
    Matrix c(2, 2);
    c << 1, 0, 0, 4;
    const Matrix t_c = weighted_right_inverse(factorize_spd(c), j2);
    const Vector df = feasible_direction(b, t_c, t_mp, 0.5);
    CHECK(df(0) == Catch::Approx(0.4).margin(1e-12));
    CHECK(df(1) == Catch::Approx(1.6).margin(1e-12));
    CHECK(std::abs((j2 * df)(0) + b.f2(0)) < 1e-12);  // J2 dx_f = -f2
  }
}

TEST_CASE("interpolated_step endpoint alpha = 1 is exactly the SQP step") {
  const auto [p, ref] = hs77();
  const EvalBundle b = bundle_at(p, p.initial_point);
  const RegularizedHessian reg =
      regularize(build_hessian(HessianStrategy::ggn(), p, {p.initial_point, Vector::Zero(2)}), b.j2);
  const StepComponents s = interpolated_step(b, reg, config_with(1.0));
  CHECK((s.dx - s.dx_sqp).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("interpolated_step on p_lin at (2,0) contracts the null-space error") {
  const auto [p, ref] = p_lin();
  Vector x(2);
  x << 2, 0;
  const EvalBundle b = bundle_at(p, x);
  const RegularizedHessian reg = regularize(Matrix::Identity(2, 2), b.j2);
  const StepComponents s = interpolated_step(b, reg, config_with(0.5));
  CHECK(std::abs(s.dx(0) + 0.5) < 1e-12);
  CHECK(std::abs(s.dx(1) - 0.5) < 1e-12);
  const Vector next = x + s.dx;
  CHECK(std::abs(next(0) - 1.5) < 1e-12);
  CHECK(std::abs(next(1) - 0.5) < 1e-12);
}

TEST_CASE("interpolated_step vanishes at KKT pairs") {
  for (const auto& make : {p_lin, p_circle}) {
    const auto [p, ref] = make();
    const EvalBundle b = bundle_at(p, ref.x_star);
    const RegularizedHessian reg =
        regularize(build_hessian(HessianStrategy::exact(), p, {ref.x_star, ref.lambda_star}), b.j2);
    const StepComponents s = interpolated_step(b, reg, config_with(0.5));
    CHECK(s.dx.norm() < 1e-9);
  }
}

TEST_CASE("alpha outside (0,1] is rejected") {
  const auto [p, ref] = p_lin();
  const EvalBundle b = bundle_at(p, Vector::Zero(2));
  const RegularizedHessian reg = regularize(Matrix::Identity(2, 2), b.j2);
  CHECK_THROWS_AS(interpolated_step(b, reg, config_with(0.0)), InvalidArgument);
  CHECK_THROWS_AS(interpolated_step(b, reg, config_with(1.5)), InvalidArgument);
  CHECK_THROWS_AS(feasible_direction(b, Matrix::Zero(2, 1), Matrix::Zero(2, 1), -0.1),
                  InvalidArgument);
}

TEST_CASE("random instances: interpolation identity, feasibility, path equivalence") {
  std::mt19937 rng(57);
  std::uniform_real_distribution<double> alpha_dist(0.05, 0.95);
  for (int t = 0; t < 100; ++t) {
    const Index n = 2 + static_cast<Index>(rng() % 7);
    const Index m = 1 + static_cast<Index>(rng() % (n - 1));
    EvalBundle b;
    b.f1 = 0.0;
    b.f2 = random_vector(rng, m, 2.0);
    b.j1 = random_vector(rng, n, 2.0).transpose();
    b.j2 = random_full_row_rank(rng, m, n);
    const Matrix hess = rng() % 2 == 0 ? Matrix(Matrix::Identity(n, n)) : random_spd(rng, n);
    const RegularizedHessian reg = regularize(hess, b.j2);

    const double alpha = alpha_dist(rng);
    const StepComponents se = interpolated_step(b, reg, config_with(alpha));
    const StepComponents ss = interpolated_step(b, reg, config_with(alpha, DirectionPath::SaddleSolve));

    // interpolation identity on both paths
    for (const StepComponents& s : {se, ss}) {
      const Vector mix = alpha * s.dx_sqp + (1.0 - alpha) * s.dx_feasible;
      CHECK((s.dx - mix).norm() <= 1e-10 * (1.0 + s.dx.norm()));
      CHECK((b.j2 * s.dx + b.f2).norm() <= 1e-9 * (1.0 + b.f2.norm()));
      CHECK((b.j2 * s.dx_feasible + b.f2).norm() <= 1e-9 * (1.0 + b.f2.norm()));
    }
    // the two direction routes agree
    CHECK((se.dx_sqp - ss.dx_sqp).norm() <= 1e-8 * (1.0 + ss.dx_sqp.norm()));
    CHECK((se.lambda_next - ss.lambda_next).norm() <= 1e-8 * (1.0 + ss.lambda_next.norm()));
  }
}

TEST_CASE("SQP direction is a descent direction at feasible points") {
  std::mt19937 rng(61);
  for (int t = 0; t < 100; ++t) {
    const Index n = 2 + static_cast<Index>(rng() % 7);
    const Index m = 1 + static_cast<Index>(rng() % (n - 1));
    EvalBundle b;
    b.f1 = 0.0;
    b.f2 = Vector::Zero(m);  // feasible point
    b.j1 = random_vector(rng, n, 2.0).transpose();
    b.j2 = random_full_row_rank(rng, m, n);
    const RegularizedHessian reg = regularize(random_spd(rng, n), b.j2);
    const auto [dx, lam] = sqp_direction(b, reg);
    const double slope = (b.j1 * dx)(0);
    CHECK(slope <= 1e-10);
    if (dx.norm() > 1e-8) CHECK(slope < 0.0);
  }
}
