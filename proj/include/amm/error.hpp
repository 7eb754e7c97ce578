// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amm {

enum class ErrorKind {
  invalid_input,      // malformed or non-finite data
  invalid_parameter,  // argument outside its documented range
  singular_matrix,
  precondition,       // e.g. a non-accretive operand
  numeric_failure,    // non-convergence, path disagreement
  domain,             // scalar argument on the branch cut
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorKind::invalid_input, what) {}
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what) : Error(ErrorKind::invalid_parameter, what) {}
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(std::size_t pivot, const std::string& what)
      : Error(ErrorKind::singular_matrix, what), pivot_(pivot) {}

  /// Index of the column whose pivot fell below the threshold.
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class PreconditionError : public Error {
 public:
  PreconditionError(double margin, const std::string& what)
      : Error(ErrorKind::precondition, what), margin_(margin) {}

  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

class NumericFailure : public Error {
 public:
  NumericFailure(double residual, const std::string& what)
      : Error(ErrorKind::numeric_failure, what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

}  // namespace amm
