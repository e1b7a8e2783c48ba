#ifndef CHOLPARAM_ERRORS_HPP
#define CHOLPARAM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cholparam {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input failed a structural check (shape, symmetry, domain).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A Cholesky pivot fell at or below the positive-definiteness tolerance.
/// `pivot_index` is 1-based; `pivot_value` is the squared pivot (the Schur
/// complement) before the square root is taken.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(std::size_t pivot_index, double pivot_value)
      : Error("matrix is not positive definite: pivot " +
              std::to_string(pivot_index) + " = " +
              std::to_string(pivot_value)),
        pivot_index(pivot_index),
        pivot_value(pivot_value) {}

  std::size_t pivot_index;
  double pivot_value;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class SchurNonPositive : public Error {
 public:
  explicit SchurNonPositive(double c)
      : Error("Schur complement is not positive: " + std::to_string(c)),
        value(c) {}
  double value;
};

/// A difference of successive determinant ratios was negative beyond the
/// clamp band. Indices are 1-based, (i, j) with i < j.
class NegativeRadicand : public Error {
 public:
  NegativeRadicand(std::size_t i, std::size_t j, double value)
      : Error("negative radicand at (i=" + std::to_string(i) +
              ", j=" + std::to_string(j) + "): " + std::to_string(value)),
        i(i),
        j(j),
        value(value) {}
  std::size_t i;
  std::size_t j;
  double value;
};

class DegenerateColumn : public Error {
 public:
  explicit DegenerateColumn(std::size_t index)
      : Error("column " + std::to_string(index) + " has zero variance"),
        index(index) {}
  std::size_t index;
};

class NearSingular : public Error {
 public:
  using Error::Error;
};

class InvalidSemiPartial : public Error {
 public:
  explicit InvalidSemiPartial(double r)
      : Error("semi-partial correlation outside (-1, 1): " + std::to_string(r)),
        value(r) {}
  double value;
};

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t expected, std::size_t got)
      : Error("length mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(got)),
        expected(expected),
        got(got) {}
  std::size_t expected;
  std::size_t got;
};

}  // namespace cholparam

#endif  // CHOLPARAM_ERRORS_HPP
