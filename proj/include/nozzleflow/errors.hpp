#pragma once

#include <stdexcept>
#include <string>

namespace nozzleflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. rho < 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Kernel quadrature failed its node-doubling certificate.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Time step exceeds the explicit stability bound.
class StabilityError : public Error {
 public:
  using Error::Error;
};

/// Density dropped below the vacuum floor.
class CavitationError : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf produced by the solver.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Fewer than two runs of a sweep succeeded.
class SweepError : public Error {
 public:
  using Error::Error;
};

}  // namespace nozzleflow
