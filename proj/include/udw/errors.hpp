#pragma once

#include <stdexcept>
#include <string>

namespace udw {

// Bad user input: malformed config, out-of-range parameter, unknown key.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Any failure of the numerical pipeline (quadrature, cross-checks, state invariants).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double best, double err_est)
      : NumericalError(what), best_estimate(best), error_estimate(err_est) {}
  double best_estimate;
  double error_estimate;
};

class CrossCheckError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AssemblyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnsupportedElementError : public std::invalid_argument {
 public:
  explicit UnsupportedElementError(const std::string& what) : std::invalid_argument(what) {}
};

class NoEntanglementError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace udw
