#pragma once

// Dense linear-algebra kernels for the solver: Cholesky factorization with
// positive-definiteness detection, regularized and direct saddle-point
// solves, generalized right inverses of wide Jacobians, and the spectral
// norm. Everything is value-semantic and pure.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "isqp/errors.hpp"
#include "isqp/types.hpp"

namespace isqp {

namespace detail {

inline void ensure_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw NonFinite(std::string(what) + ": entries are not finite");
}

inline void ensure_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw NonFinite(std::string(what) + ": entries are not finite");
}

}  // namespace detail

/// Cholesky factorization A = L*L' of a symmetric positive definite matrix.
class SpdFactorization {
 public:
  explicit SpdFactorization(Eigen::LLT<Matrix> llt) : llt_(std::move(llt)) {}

  Index size() const { return llt_.matrixLLT().rows(); }

  /// Lower-triangular factor L with strictly positive diagonal.
  Matrix factor() const { return llt_.matrixL(); }

  template <typename Derived>
  auto solve(const Eigen::MatrixBase<Derived>& rhs) const {
    return llt_.solve(rhs).eval();
  }

 private:
  Eigen::LLT<Matrix> llt_;
};

/// Cholesky attempt that reports indefiniteness as a value instead of an
/// exception, for use inside escalation loops.
inline std::optional<SpdFactorization> try_factorize_spd(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw InvalidArgument("factorize_spd: matrix must be square and nonempty");
  detail::ensure_finite(a, "factorize_spd");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidArgument("factorize_spd: matrix is not symmetric");
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) return std::nullopt;
  return SpdFactorization(std::move(llt));
}

inline SpdFactorization factorize_spd(const Matrix& a) {
  auto f = try_factorize_spd(a);
  if (!f) throw NotPositiveDefinite("factorize_spd: nonpositive pivot");
  return std::move(*f);
}

/// Escalation schedule for the regularization weight cbar:
/// 0, first, first*growth, ... while <= cap.
struct CbarPolicy {
  double first = 1.0;
  double growth = 10.0;
  double cap = 1e8;
};

namespace detail {

constexpr double kRankConditionLimit = 1e12;

/// Smallest scheduled cbar for which B + cbar*J2'*J2 admits a Cholesky
/// factorization, together with that factorization.
inline std::optional<std::pair<double, SpdFactorization>> escalate_cbar(
    const Matrix& b, const Matrix& j2, const CbarPolicy& policy) {
  const Matrix jtj = j2.transpose() * j2;
  double cbar = 0.0;
  while (true) {
    Matrix c = cbar == 0.0 ? b : Matrix(b + cbar * jtj);
    if (auto f = try_factorize_spd(c)) return std::make_pair(cbar, std::move(*f));
    cbar = cbar == 0.0 ? policy.first : cbar * policy.growth;
    if (cbar > policy.cap) return std::nullopt;
  }
}

/// Factors the m-by-m Schur complement and rejects rank-deficient Jacobians.
inline SpdFactorization factorize_schur(Matrix d, const char* context) {
  d = 0.5 * (d + d.transpose()).eval();  // scrub rounding asymmetry
  auto f = try_factorize_spd(d);
  if (!f) throw RankDeficient(std::string(context) + ": Schur complement is not positive definite");
  Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(d.rows() - 1);
  if (!(lo > 0.0) || hi / lo > kRankConditionLimit)
    throw RankDeficient(std::string(context) + ": Schur complement condition estimate exceeds 1e12");
  return std::move(*f);
}

struct WeightedRightInverse {
  Matrix t;           // C^-1 J2' D^-1, n x m
  SpdFactorization d; // factorization of D = J2 C^-1 J2'
  Matrix cinv_j2t;    // C^-1 J2', n x m
};

inline WeightedRightInverse weighted_right_inverse_with_d(const SpdFactorization& c,
                                                          const Matrix& j2) {
  if (j2.cols() != c.size() || j2.rows() < 1)
    throw InvalidArgument("weighted_right_inverse: J2 must be m x n with m >= 1 and n matching C");
  ensure_finite(j2, "weighted_right_inverse");
  Matrix cinv_j2t = c.solve(Matrix(j2.transpose()));
  SpdFactorization d = factorize_schur(j2 * cinv_j2t, "weighted_right_inverse");
  Matrix t = d.solve(Matrix(cinv_j2t.transpose())).transpose();
  return {std::move(t), std::move(d), std::move(cinv_j2t)};
}

}  // namespace detail

/// Generalized right inverse T = C^-1 J2' (J2 C^-1 J2')^-1 of a full-row-rank
/// J2, weighted by a positive definite C. Satisfies J2 * T = I.
inline Matrix weighted_right_inverse(const SpdFactorization& c, const Matrix& j2) {
  return detail::weighted_right_inverse_with_d(c, j2).t;
}

/// Moore-Penrose right inverse T = J2' (J2 J2')^-1 (minimum-norm solution map).
inline Matrix moore_penrose_right_inverse(const Matrix& j2) {
  if (j2.rows() < 1 || j2.cols() < 1)
    throw InvalidArgument("moore_penrose_right_inverse: empty matrix");
  detail::ensure_finite(j2, "moore_penrose_right_inverse");
  SpdFactorization f = detail::factorize_schur(j2 * j2.transpose(), "moore_penrose_right_inverse");
  return f.solve(Matrix(j2)).transpose();
}

/// Solves B dx + J2' lam = -g, J2 dx = -h through the regularized route:
/// factor C = B + cbar*J2'J2 (escalating cbar until positive definite),
/// eliminate to the Schur system D mu = h - J2 C^-1 g, and undo the shift
/// with lam = mu - cbar*h.
inline std::pair<Vector, Vector> solve_saddle(const Matrix& b, const Matrix& j2,
                                              const Vector& g, const Vector& h,
                                              const CbarPolicy& policy = {}) {
  const Index n = b.rows();
  const Index m = j2.rows();
  if (b.cols() != n || j2.cols() != n || g.size() != n || h.size() != m || m < 1)
    throw InvalidArgument("solve_saddle: inconsistent dimensions");
  detail::ensure_finite(g, "solve_saddle g");
  detail::ensure_finite(h, "solve_saddle h");
  auto esc = detail::escalate_cbar(b, j2, policy);
  if (!esc) throw SingularSystem("solve_saddle: cbar escalation exhausted without a positive definite C");
  const double cbar = esc->first;
  const SpdFactorization& c = esc->second;
  Matrix cinv_j2t = c.solve(Matrix(j2.transpose()));
  Matrix d = j2 * cinv_j2t;
  d = 0.5 * (d + d.transpose()).eval();
  auto df = try_factorize_spd(d);
  if (!df) throw SingularSystem("solve_saddle: Schur complement is not positive definite");
  Vector cinv_g = c.solve(g);
  Vector mu = df->solve(h - j2 * cinv_g);
  Vector dx = -(cinv_g + cinv_j2t * mu);
  Vector lam = mu - cbar * h;
  return {std::move(dx), std::move(lam)};
}

/// Cross-check route: assemble the indefinite saddle matrix
/// [B J2'; J2 0] and solve it with a rank-revealing LU.
inline std::pair<Vector, Vector> solve_saddle_direct(const Matrix& b, const Matrix& j2,
                                                     const Vector& g, const Vector& h) {
  const Index n = b.rows();
  const Index m = j2.rows();
  if (b.cols() != n || j2.cols() != n || g.size() != n || h.size() != m || m < 1)
    throw InvalidArgument("solve_saddle_direct: inconsistent dimensions");
  detail::ensure_finite(b, "solve_saddle_direct B");
  detail::ensure_finite(g, "solve_saddle_direct g");
  detail::ensure_finite(h, "solve_saddle_direct h");
  Matrix k = Matrix::Zero(n + m, n + m);
  k.topLeftCorner(n, n) = b;
  k.topRightCorner(n, m) = j2.transpose();
  k.bottomLeftCorner(m, n) = j2;
  Vector rhs(n + m);
  rhs << -g, -h;
  Eigen::FullPivLU<Matrix> lu(k);
  if (!lu.isInvertible()) throw SingularSystem("solve_saddle_direct: saddle matrix is singular");
  Vector sol = lu.solve(rhs);
  return {sol.head(n), sol.tail(m)};
}

/// Largest singular value.
inline double spectral_norm(const Matrix& a) {
  detail::ensure_finite(a, "spectral_norm");
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace isqp
