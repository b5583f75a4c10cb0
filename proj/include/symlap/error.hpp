#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace symlap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

class DegreeMismatchError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class DofCapError : public Error {
 public:
  using Error::Error;
};

class AmbiguousKernelError : public Error {
 public:
  using Error::Error;
};

class HypothesisError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised by iterative eigensolvers that hit their iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best_residuals)
      : Error(what), best_residuals_(std::move(best_residuals)) {}

  const std::vector<double>& best_residuals() const { return best_residuals_; }

 private:
  std::vector<double> best_residuals_;
};

}  // namespace symlap
