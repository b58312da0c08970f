#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "vortex/types.hpp"

namespace vortex {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input; `field()` names the offending parameter.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Closure constraint of the tangent field violated.
class ConstraintError : public Error {
 public:
  ConstraintError(const std::string& message, Vec3 residual) : Error(message), residual_(residual) {}

  const Vec3& residual() const noexcept { return residual_; }

 private:
  Vec3 residual_;
};

/// Sampling grid too coarse for the stored modes.
class AliasingError : public Error {
 public:
  using Error::Error;
};

/// Requested time step exceeds the explicit scheme's stability limit.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& message, double bound) : Error(message), bound_(bound) {}

  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

class ConnectivityError : public Error {
 public:
  using Error::Error;
};

/// Eigenvalue table too short to decide every selection rule.
class IncompleteSpectrumError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, int iterations)
      : Error(message), iterations_(iterations) {}

  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace vortex
