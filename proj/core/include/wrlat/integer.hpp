#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace wrlat {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

std::string to_decimal(const Integer& value);
Integer integer_power(const Integer& base, unsigned exponent);

/// Dense row-major matrix over the integers. Rows of a coordinate matrix are
/// basis vectors.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Integer> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<Integer> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  IntMatrix transpose() const;
  bool is_symmetric() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);

/// Fraction-free (Bareiss) determinant of a square matrix.
Integer determinant(const IntMatrix& m);

std::size_t rank(const IntMatrix& m);

/// Row-style Hermite normal form: upper echelon, positive pivots, entries above
/// each pivot reduced into [0, pivot). Zero rows are dropped.
IntMatrix hermite_normal_form(const IntMatrix& m);

/// Invariant factors d_1 | d_2 | ... of the row lattice (Smith normal form
/// diagonal, including units).
std::vector<Integer> smith_invariants(const IntMatrix& m);

/// True iff x lies in the Z-span of the rows of `basis`.
bool in_row_span(const IntMatrix& basis, std::span<const Integer> x);

/// Exact coefficients y with y * basis = x for a square nonsingular basis;
/// nullopt when the rational solution is not integral.
std::optional<std::vector<Integer>> integer_coefficients(const IntMatrix& basis,
                                                         std::span<const Integer> x);

/// Leading principal minors all positive (exact Sylvester test).
bool is_positive_definite(const IntMatrix& symmetric);

}  // namespace wrlat
