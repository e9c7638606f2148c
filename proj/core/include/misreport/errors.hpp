#pragma once

#include <stdexcept>
#include <string>

namespace misreport {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed data, inconsistent configuration, out-of-range
// arguments. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A referenced column or field does not exist or has the wrong shape.
class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A distribution parameter outside its domain (b <= 0, alpha <= 0, ...).
class ParameterDomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Numerical breakdown during sampling (failed factorization, non-finite
// linear predictor). The CLI maps these to exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace misreport
