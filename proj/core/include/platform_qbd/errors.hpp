#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pqbd {

// Base class for numerical failures raised by the solvers.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pivot fell below the singularity threshold during LU elimination.
class SingularMatrixError : public SolverError {
 public:
  SingularMatrixError(std::size_t pivot_index, double pivot_value)
      : SolverError("matrix is singular to machine precision at pivot " +
                    std::to_string(pivot_index)),
        pivot_index(pivot_index),
        pivot_value(pivot_value) {}

  std::size_t pivot_index;
  double pivot_value;
};

// An iteration exhausted its budget before reaching the requested accuracy.
class NonConvergenceError : public SolverError {
 public:
  NonConvergenceError(const std::string& what, long iterations, double residual)
      : SolverError(what), iterations(iterations), residual(residual) {}

  long iterations;
  double residual;
};

class DimensionError : public SolverError {
 public:
  using SolverError::SolverError;
};

// Requested instance exceeds a hard implementation limit.
class CapacityError : public SolverError {
 public:
  using SolverError::SolverError;
};

// Operation requires a positive-recurrent instance.
class UnstableModelError : public SolverError {
 public:
  using SolverError::SolverError;
};

// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pqbd
