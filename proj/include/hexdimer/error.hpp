#pragma once

#include <stdexcept>
#include <string>

namespace hexdimer {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (bad shape, q out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The brute-force enumeration was asked for a box beyond its size guard.
class OracleTooLarge : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A numerical routine failed: singular matrix, non-converged quadrature or
/// series, ill-conditioned fit.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hexdimer
