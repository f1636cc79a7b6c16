#pragma once

// Dense matrices over a Field and exact Gaussian elimination.

#include <vector>

#include "ebundle/field.hpp"

namespace ebundle {

class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldPtr field, int rows, int cols);
  static Matrix identity(FieldPtr field, int n);

  const FieldPtr& field() const { return field_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Elem& at(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Elem& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  std::vector<Elem> row(int i) const;
  std::vector<Elem> col(int j) const;
  void set_col(int j, const std::vector<Elem>& v);

  Matrix transpose() const;
  Matrix select_cols(const std::vector<int>& cols) const;
  Matrix select_rows(const std::vector<int>& rows) const;
  /// Horizontal concatenation.
  Matrix hcat(const Matrix& b) const;
  Matrix vcat(const Matrix& b) const;
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  std::vector<Elem> apply(const std::vector<Elem>& v) const;
  bool is_zero() const;
  friend bool operator==(const Matrix& a, const Matrix& b);

  /// In-place reduced row echelon form; returns pivot columns.
  std::vector<int> rref();
  int rank() const;
  /// Basis of {v : A v = 0}, one vector per free column, in column order.
  std::vector<std::vector<Elem>> kernel() const;
  /// Square determinant.
  Elem det() const;
  /// Throws DivisionByZero if singular.
  Matrix inverse() const;

 private:
  FieldPtr field_;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Elem> a_;
};

}  // namespace ebundle
