#pragma once

#include <stdexcept>
#include <string>

namespace regimevar {

/// Broad failure classes. The CLI maps them to stable exit codes.
enum class ErrorKind { Input, Numerical, Infeasible };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Bad parameters, malformed documents, violated preconditions.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

/// Quadrature, root-finding or matrix-exponential failure.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::Numerical, what) {}
};

/// Inversion produced a probability outside [0,1]; usually a bad contour.
class ContourError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The optimization problem has no solution for the given inputs.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what)
      : Error(ErrorKind::Infeasible, what) {}
};

/// q_{1-alpha}(S_T) >= E^Q[S_T]: the first-order condition has no root.
class ExistenceViolated : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

class TargetUnattainable : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

class BudgetExceedsAnyPut : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

}  // namespace regimevar
