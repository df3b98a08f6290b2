//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GENNES_ERROR_HPP
#define GENNES_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gennes {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// linalg
class NotPositiveDefinite : public Error {
public:
  using Error::Error;
};
class NotSymmetric : public Error {
public:
  using Error::Error;
};
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

// objectives
class ShiftOutOfDomain : public Error {
public:
  using Error::Error;
};
class BudgetExhausted : public Error {
public:
  using Error::Error;
};

// generator / baselines
class ShapeMismatch : public Error {
public:
  using Error::Error;
};

/// Raised when an objective returns NaN or infinity at a query.
class NonFiniteValue : public Error {
public:
  using Error::Error;
};

// gp
class DuplicatePoints : public Error {
public:
  using Error::Error;
};

// bench
class ConfigError : public Error {
public:
  using Error::Error;
};
class ParseError : public ConfigError {
public:
  using ConfigError::ConfigError;
};
class ValidationError : public ConfigError {
public:
  using ConfigError::ConfigError;
};
class EmptyTrace : public Error {
public:
  using Error::Error;
};

}  // namespace gennes

#endif  // GENNES_ERROR_HPP
