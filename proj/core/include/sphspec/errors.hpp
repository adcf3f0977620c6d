#pragma once

#include <stdexcept>
#include <string>

namespace sphspec {

// Base of every library failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument or malformed input (x <= 0, n < 1, unparsable file, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Potential outside the admissible class  x*q~(x) in L^1.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

// Numerical breakdown: non-convergence, bracket failure, count mismatch.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BracketFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CountMismatch : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Robin ground state not positive, so no nonnegative zero exists for n = 0.
class NonPositiveGroundState : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace sphspec
