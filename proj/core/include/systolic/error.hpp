#pragma once

#include <stdexcept>
#include <string>

namespace systolic {

// Base of every exception thrown by the library. `kind()` is a stable
// machine-readable tag used by the CLI and in JSON error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& message)
      : Error("invalid_input", message) {}
};

class SingularBasis : public Error {
 public:
  explicit SingularBasis(const std::string& message = "singular basis")
      : Error("singular_basis", message) {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& message)
      : Error("budget_exceeded", message) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double residual)
      : Error("convergence", message), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class CertificationError : public Error {
 public:
  CertificationError(const std::string& message, double residual)
      : Error("certification", message), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class TopologyError : public Error {
 public:
  explicit TopologyError(const std::string& message)
      : Error("topology", message) {}
};

}  // namespace systolic
