#pragma once

#include <stdexcept>
#include <string>

namespace gbb {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (t >= 1, s > t, c <= 1/2 ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Invalid run or grid parameters, rejected before any computation.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Operation not defined for the given drift family.
class UnsupportedError : public Error {
public:
  using Error::Error;
};

/// Adaptive quadrature exhausted its depth or panel budget.
class OracleFailure : public Error {
public:
  using Error::Error;
};

/// Factorization failure or a covariance matrix outside tolerance.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

/// A user-supplied function broke its declared contract (growth bound, grid mismatch).
class ContractViolation : public Error {
public:
  using Error::Error;
};

}  // namespace gbb
