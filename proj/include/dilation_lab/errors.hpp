#pragma once

#include <stdexcept>
#include <string>

namespace dlab {

// Base of every error raised by the library. Validation failures (bad input,
// unphysical parameters) derive from ValidationError; a disagreement between
// two routes that should agree is an InternalInconsistency.
class DilationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public DilationError {
 public:
  using DilationError::DilationError;
};

class InternalInconsistency : public DilationError {
 public:
  using DilationError::DilationError;
};

class HermiticityError : public ValidationError {
 public:
  explicit HermiticityError(double residual)
      : ValidationError("matrix is not Hermitian (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class NotPositiveDefinite : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SingularMatrix : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ExceptionalPoint : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class BrokenSymmetry : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotDiagonalizable : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotNormalized : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class MetricMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidProbability : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonOrthonormalBasis : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConstraintViolated : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace dlab
