#pragma once

#include <stdexcept>
#include <string>

namespace cho {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to converge or produced a non-finite value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of panels; carries the best estimate reached.
class AccuracyError : public NumericalError {
 public:
  AccuracyError(const std::string& what, double best_estimate, double error_estimate)
      : NumericalError(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// Arguments outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Root bracketing or polishing failed in the eigenvalue solver.
class SolverError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Prefixes the message of a pipeline failure with the stage that raised it.
class StageError : public NumericalError {
 public:
  StageError(const std::string& stage, const std::string& what)
      : NumericalError(stage + ": " + what), stage_(stage) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace cho
