#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "isqp/derivative_check.hpp"
#include "isqp/problems.hpp"
#include "test_support.hpp"

using namespace isqp;
using isqp::testing::random_vector;

TEST_CASE("suite registry") {
  CHECK(suite_names() == std::vector<std::string>{"hs77", "p_lin", "p_circle"});
  for (const auto& name : suite_names()) CHECK(make_suite_problem(name).problem.name == name);
  CHECK_THROWS_AS(make_suite_problem("nope"), InvalidArgument);
}

TEST_CASE("every suite problem validates and has full data") {
  for (const auto& name : suite_names()) {
    const SuiteProblem s = make_suite_problem(name);
    CHECK_NOTHROW(validate(s.problem));
    CHECK(s.problem.has_exact_hessian());
    CHECK(s.problem.has_residual());
    CHECK(s.reference.x_star.size() == s.problem.n);
  }
}

TEST_CASE("every reference solution satisfies the KKT residual bound") {
  for (const auto& name : suite_names()) {
    const SuiteProblem s = make_suite_problem(name);
    const Vector lam = s.reference.lambda_star.size() > 0
                           ? s.reference.lambda_star
                           : least_squares_multipliers(s.problem, s.reference.x_star);
    const double r = kkt_residual(evaluate(s.problem, s.reference.x_star), lam);
    INFO(name << " reference residual " << r);
    CHECK(r <= 1e-5);
  }
}

TEST_CASE("hs77 construction") {
  const auto [p, ref] = hs77();
  CHECK(p.n == 5);
  CHECK(p.m == 2);
  const EvalBundle b = evaluate(p, p.initial_point);
  CHECK(b.f2(0) == Catch::Approx(5.1715728752538102).margin(1e-12));
  CHECK(b.f2(1) == Catch::Approx(56.585786437626908).margin(1e-12));
  // the objective is exactly the sum of the squared residual terms
  CHECK(p.residual_scale == 1.0);
  CHECK(p.residual(p.initial_point).squaredNorm() == Catch::Approx(4.0).margin(1e-14));
  CHECK(b.f1 == Catch::Approx(4.0).margin(1e-14));
  Vector xs(5);
  xs << 1.166172, 1.182111, 1.380257, 1.506036, 0.610920;
  CHECK((ref.x_star - xs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hs77 residual identity holds at random points") {
  const auto [p, ref] = hs77();
  std::mt19937 rng(3);
  for (int t = 0; t < 100; ++t) {
    const Vector x = p.initial_point + random_vector(rng, 5, 1.5);
    const double lhs = p.residual_scale * p.residual(x).squaredNorm();
    const double rhs = p.objective(x);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("p_lin construction") {
  const auto [p, ref] = p_lin();
  CHECK(kkt_residual(evaluate(p, ref.x_star), ref.lambda_star) <= 1e-12);
  CHECK(ref.lambda_star(0) == -1.0);
  CHECK(p.constraints(ref.x_star)(0) == 0.0);  // 1 + 1 - 2
}

TEST_CASE("p_circle construction") {
  const auto [p, ref] = p_circle();
  // stationarity 2(x1 - 2) + 2 lambda x1 = 0 at x1 = 1 forces lambda = 1
  CHECK(ref.lambda_star(0) == 1.0);
  CHECK(p.constraints(ref.x_star)(0) == 0.0);
  const Matrix j2 = p.constraint_jacobian(p.initial_point);
  CHECK(j2(0, 0) == Catch::Approx(1.2).margin(1e-15));
  CHECK(j2(0, 1) == Catch::Approx(1.6).margin(1e-15));
}

TEST_CASE("derivative checks pass at the start and across the unit ball") {
  std::mt19937 rng(19);
  for (const auto& name : suite_names()) {
    const SuiteProblem s = make_suite_problem(name);
    double worst = check_derivatives(s.problem, s.problem.initial_point).max_error();
    for (int t = 0; t < 20; ++t) {
      Vector dir = random_vector(rng, s.problem.n);
      dir /= std::max(1.0, dir.norm());  // inside the unit ball
      worst = std::max(worst, check_derivatives(s.problem, s.problem.initial_point + dir).max_error());
    }
    INFO(name << " worst relative error " << worst);
    CHECK(worst <= 1e-5);
  }
}
