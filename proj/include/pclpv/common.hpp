#pragma once

#include <stdexcept>
#include <string>

namespace pclpv {

inline constexpr const char* kVersion = "0.1.0";

/// Base class for all pclpv errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad configuration: unknown family, missing key, invalid value.
struct ConfigError : Error {
  using Error::Error;
};

/// Evaluation outside the parameter support.
struct DomainError : Error {
  using Error::Error;
};

/// Numerical breakdown: root finding, factorization, eigenvalue floor.
struct NumericalError : Error {
  using Error::Error;
};

/// Incompatible matrix/vector shapes.
struct DimensionError : Error {
  using Error::Error;
};

/// Invalid caller-provided data (e.g. R not positive definite).
struct InputError : Error {
  using Error::Error;
};

}  // namespace pclpv
