#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qlh {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: non-Hermitian operators, bad clauses, kind mismatches.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Problem size beyond what a routine is willing to allocate.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An iterative method stopped before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A matrix that should be PSD has an eigenvalue below the allowed floor.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// Graph structure does not admit the requested pipeline. `witness` holds
/// an odd cycle as a list of vertex labels when bipartiteness fails.
class StructureError : public Error {
 public:
  StructureError(const std::string& what, std::vector<std::string> witness = {})
      : Error(what), witness_(std::move(witness)) {}
  const std::vector<std::string>& witness() const noexcept { return witness_; }

 private:
  std::vector<std::string> witness_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace qlh
