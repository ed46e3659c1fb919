#pragma once

#include <stdexcept>
#include <string>

namespace liftfinsler {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Metric tensor is not symmetric positive definite.
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Two vectors spanning a flag are (numerically) collinear.
class DegeneratePlaneError : public Error {
 public:
  using Error::Error;
};

class ZeroVectorError : public Error {
 public:
  using Error::Error;
};

/// The (alpha,beta)-metric is not defined at the requested vector,
/// e.g. a Kropina metric on the hyperplane beta(y) = 0.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotBerwaldError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Two independent routes to the same classification disagreed.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  ValidationError(const std::string& check, double residual, const std::string& detail)
      : Error("validation failed [" + check + "]: " + detail), check_(check), residual_(residual) {}

  const std::string& check() const noexcept { return check_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string check_;
  double residual_;
};

}  // namespace liftfinsler
