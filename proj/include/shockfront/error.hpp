#pragma once

#include <stdexcept>
#include <string>

namespace shockfront {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the domain of definition (v <= 0, rho outside its window, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Parameter set that makes a closed form divide by zero (alpha2 = 0, rho = -alpha3, ...).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Iterative method failed to converge, or a numerical breakdown such as vacuum.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Equation with more than one admissible solution (non-monotone entropy).
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

/// Malformed or schema-violating run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace shockfront
