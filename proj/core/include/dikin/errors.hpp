#pragma once

#include <stdexcept>
#include <string>

namespace dikin {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Matrix/vector shapes do not line up (bad A/b sizes, wrong point dimension).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The constraint matrix does not have full column rank.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// A point that must lie strictly inside the polytope does not.
class NotInterior : public Error {
 public:
  using Error::Error;
};

/// A chord query hit a recession direction of the polytope.
class UnboundedDirection : public Error {
 public:
  using Error::Error;
};

/// A Cholesky or eigenvalue factorization failed (matrix not positive definite).
class FactorizationFailure : public Error {
 public:
  using Error::Error;
};

/// An iterative solver exhausted its iteration budget.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A finite-difference probe left the polytope interior.
class StepOutOfDomain : public Error {
 public:
  using Error::Error;
};

/// Phase-1 certified that the polytope has no strictly interior point.
class NoInteriorPoint : public Error {
 public:
  using Error::Error;
};

/// A reference distribution was requested for a body without known marginals.
class UnknownReference : public Error {
 public:
  using Error::Error;
};

}  // namespace dikin
