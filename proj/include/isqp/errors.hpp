#pragma once

#include <stdexcept>
#include <string>

namespace isqp {

/// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (dimensions, parameter range,
/// asymmetric input to a symmetric factorization).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An input matrix or vector contains NaN or Inf entries.
class NonFinite : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorization hit a nonpositive pivot.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// The constraint Jacobian lost full row rank (Schur complement failed to
/// factor, or its condition estimate exceeded the threshold).
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// A saddle-point system could not be solved even after regularization.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// No weight in the escalation schedule made B + cbar*J2'J2 positive definite.
class RegularizationFailed : public Error {
 public:
  using Error::Error;
};

/// A Hessian strategy needs a callback the problem does not provide.
class MissingHook : public Error {
 public:
  using Error::Error;
};

/// A problem callback returned NaN/Inf or the wrong shape.
class EvaluationFailure : public Error {
 public:
  using Error::Error;
};

/// Not enough usable residual pairs for a convergence-rate fit.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace isqp
