#include "ebundle/linalg.hpp"

#include "ebundle/errors.hpp"

namespace ebundle {

Matrix::Matrix(FieldPtr field, int rows, int cols)
    : field_(std::move(field)), rows_(rows), cols_(cols),
      a_(static_cast<std::size_t>(rows) * cols, field_->zero()) {}

Matrix Matrix::identity(FieldPtr field, int n) {
  Matrix m(field, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = field->one();
  return m;
}

std::vector<Elem> Matrix::row(int i) const {
  return std::vector<Elem>(a_.begin() + static_cast<std::ptrdiff_t>(i) * cols_,
                           a_.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols_);
}

std::vector<Elem> Matrix::col(int j) const {
  std::vector<Elem> v;
  v.reserve(rows_);
  for (int i = 0; i < rows_; ++i) v.push_back(at(i, j));
  return v;
}

void Matrix::set_col(int j, const std::vector<Elem>& v) {
  if (static_cast<int>(v.size()) != rows_) throw DimensionMismatch(static_cast<int>(v.size()), rows_);
  for (int i = 0; i < rows_; ++i) at(i, j) = v[i];
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

Matrix Matrix::select_cols(const std::vector<int>& cols) const {
  Matrix m(field_, rows_, static_cast<int>(cols.size()));
  for (int i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) m.at(i, static_cast<int>(j)) = at(i, cols[j]);
  return m;
}

Matrix Matrix::select_rows(const std::vector<int>& rows) const {
  Matrix m(field_, static_cast<int>(rows.size()), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < cols_; ++j) m.at(static_cast<int>(i), j) = at(rows[i], j);
  return m;
}

Matrix Matrix::hcat(const Matrix& b) const {
  if (rows_ != b.rows_) throw DimensionMismatch(b.rows_, rows_);
  Matrix m(field_, rows_, cols_ + b.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j);
    for (int j = 0; j < b.cols_; ++j) m.at(i, cols_ + j) = b.at(i, j);
  }
  return m;
}

Matrix Matrix::vcat(const Matrix& b) const {
  if (cols_ != b.cols_) throw DimensionMismatch(b.cols_, cols_);
  Matrix m(field_, rows_ + b.rows_, cols_);
  for (int j = 0; j < cols_; ++j) {
    for (int i = 0; i < rows_; ++i) m.at(i, j) = at(i, j);
    for (int i = 0; i < b.rows_; ++i) m.at(rows_ + i, j) = b.at(i, j);
  }
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch(b.rows_, a.cols_);
  const Field& F = *a.field_;
  Matrix m(a.field_, a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      if (F.is_zero(a.at(i, k))) continue;
      for (int j = 0; j < b.cols_; ++j) m.at(i, j) = F.add(m.at(i, j), F.mul(a.at(i, k), b.at(k, j)));
    }
  return m;
}

std::vector<Elem> Matrix::apply(const std::vector<Elem>& v) const {
  if (static_cast<int>(v.size()) != cols_) throw DimensionMismatch(static_cast<int>(v.size()), cols_);
  const Field& F = *field_;
  std::vector<Elem> r(rows_, F.zero());
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r[i] = F.add(r[i], F.mul(at(i, j), v[j]));
  return r;
}

bool Matrix::is_zero() const {
  for (const auto& e : a_)
    if (!field_->is_zero(e)) return false;
  return true;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

std::vector<int> Matrix::rref() {
  const Field& F = *field_;
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols_ && r < rows_; ++c) {
    int piv = -1;
    for (int i = r; i < rows_; ++i) {
      if (!F.is_zero(at(i, c))) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < cols_; ++j) std::swap(at(piv, j), at(r, j));
    Elem inv = F.inv(at(r, c));
    for (int j = c; j < cols_; ++j) at(r, j) = F.mul(at(r, j), inv);
    for (int i = 0; i < rows_; ++i) {
      if (i == r || F.is_zero(at(i, c))) continue;
      Elem f = at(i, c);
      for (int j = c; j < cols_; ++j) at(i, j) = F.sub(at(i, j), F.mul(f, at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int Matrix::rank() const {
  Matrix m = *this;
  return static_cast<int>(m.rref().size());
}

std::vector<std::vector<Elem>> Matrix::kernel() const {
  Matrix m = *this;
  auto pivots = m.rref();
  const Field& F = *field_;
  std::vector<bool> is_pivot(cols_, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Elem>> basis;
  for (int free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Elem> v(cols_, F.zero());
    v[free] = F.one();
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = F.neg(m.at(static_cast<int>(r), free));
    basis.push_back(std::move(v));
  }
  return basis;
}

Elem Matrix::det() const {
  if (rows_ != cols_) throw DimensionMismatch(cols_, rows_);
  const Field& F = *field_;
  Matrix m = *this;
  Elem d = F.one();
  for (int c = 0; c < cols_; ++c) {
    int piv = -1;
    for (int i = c; i < rows_; ++i) {
      if (!F.is_zero(m.at(i, c))) {
        piv = i;
        break;
      }
    }
    if (piv < 0) return F.zero();
    if (piv != c) {
      for (int j = 0; j < cols_; ++j) std::swap(m.at(piv, j), m.at(c, j));
      d = F.neg(d);
    }
    d = F.mul(d, m.at(c, c));
    Elem inv = F.inv(m.at(c, c));
    for (int i = c + 1; i < rows_; ++i) {
      if (F.is_zero(m.at(i, c))) continue;
      Elem f = F.mul(m.at(i, c), inv);
      for (int j = c; j < cols_; ++j) m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(c, j)));
    }
  }
  return d;
}

Matrix Matrix::inverse() const {
  if (rows_ != cols_) throw DimensionMismatch(cols_, rows_);
  Matrix aug = hcat(identity(field_, rows_));
  auto pivots = aug.rref();
  if (static_cast<int>(pivots.size()) < rows_ || pivots[rows_ - 1] >= cols_) throw DivisionByZero();
  std::vector<int> right;
  for (int j = 0; j < cols_; ++j) right.push_back(cols_ + j);
  return aug.select_cols(right);
}

}  // namespace ebundle
