#pragma once

#include <stdexcept>
#include <string>

namespace qimage {

// Base for every error raised by the library. `code()` is a stable
// machine-readable identifier used by the CLI error record.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& message)
      : Error("invalid_parameter", message) {}
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& message, double estimate, double residual)
      : Error("quadrature_not_converged", message),
        estimate_(estimate),
        residual_(residual) {}
  double estimate() const noexcept { return estimate_; }
  double residual() const noexcept { return residual_; }

 private:
  double estimate_;
  double residual_;
};

class BracketError : public Error {
 public:
  BracketError(const std::string& message, int index, double lo, double hi)
      : Error("bracket_failure", message), index_(index), lo_(lo), hi_(hi) {}
  int index() const noexcept { return index_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  int index_;
  double lo_;
  double hi_;
};

class IllConditioned : public Error {
 public:
  IllConditioned(const std::string& message, double condition)
      : Error("ill_conditioned", message), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& message, double min_eigenvalue)
      : Error("not_positive_definite", message), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

}  // namespace qimage
