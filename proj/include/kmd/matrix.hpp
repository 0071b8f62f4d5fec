#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmd/field.hpp"

namespace kmd {

template <Field K>
using Vec = std::vector<K>;

template <Field K>
bool is_zero(std::span<const K> v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

template <Field K>
Vec<K> unit_vector(std::size_t n, std::size_t i) {
  Vec<K> v(n);
  v.at(i) = K(1);
  return v;
}

template <Field K>
void axpy(Vec<K>& y, const K& a, std::span<const K> x) {
  if (y.size() != x.size()) throw std::invalid_argument("axpy: length mismatch");
  if (a.is_zero()) return;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero()) y[i] += a * x[i];
}

template <Field K>
Vec<K> operator+(Vec<K> a, const Vec<K>& b) {
  axpy(a, K(1), std::span<const K>(b));
  return a;
}

template <Field K>
Vec<K> operator-(Vec<K> a, const Vec<K>& b) {
  axpy(a, K(-1), std::span<const K>(b));
  return a;
}

template <Field K>
Vec<K> scaled(Vec<K> v, const K& a) {
  for (auto& x : v) x *= a;
  return v;
}

/// Dense row-major matrix over an exact field.
template <Field K>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = K(1);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<K>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("from_rows: ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_columns(const std::vector<Vec<K>>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw std::invalid_argument("from_columns: bad column length");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  K& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const K& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  [[nodiscard]] Vec<K> column(std::size_t c) const {
    Vec<K> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }
  [[nodiscard]] std::span<const K> row(std::size_t r) const {
    return std::span<const K>(data_).subspan(r * cols_, cols_);
  }

  [[nodiscard]] Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  [[nodiscard]] bool is_zero() const {
    for (const auto& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }

  [[nodiscard]] Vec<K> apply(std::span<const K> x) const {
    if (x.size() != cols_) throw std::invalid_argument("Matrix::apply: dimension mismatch");
    Vec<K> y(rows_);
    for (std::size_t c = 0; c < cols_; ++c) {
      if (x[c].is_zero()) continue;
      for (std::size_t r = 0; r < rows_; ++r) {
        const K& a = (*this)(r, c);
        if (!a.is_zero()) y[r] += a * x[c];
      }
    }
    return y;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix product: dimension mismatch");
    Matrix p(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const K& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) p(i, j) += aik * b(k, j);
      }
    return p;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix sum: shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix difference: shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  friend bool operator==(const Matrix&, const Matrix&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    for (std::size_t r = 0; r < m.rows_; ++r) {
      os << '[';
      for (std::size_t c = 0; c < m.cols_; ++c) os << (c ? " " : "") << m(r, c);
      os << "]\n";
    }
    return os;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<K> data_;
};

/// Reduced row echelon form together with its pivot columns.
template <Field K>
struct EchelonForm {
  Matrix<K> reduced;
  std::vector<std::size_t> pivots;  // pivot column of row i, increasing
};

/// Gauss-Jordan elimination with the first nonzero entry as pivot.
template <Field K>
EchelonForm<K> row_reduce(Matrix<K> m) {
  EchelonForm<K> out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t c = col; c < m.cols(); ++c) std::swap(m(piv, c), m(row, c));
    const K inv = m(row, col).inverse();
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      const K f = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c)
        if (!m(row, c).is_zero()) m(r, c) -= f * m(row, c);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

template <Field K>
struct Elimination {
  std::size_t rank = 0;
  std::vector<Vec<K>> kernel_basis;  // columns spanning ker(m)
  std::vector<Vec<K>> image_basis;   // pivot columns of m, spanning im(m)
};

/// Rank, kernel basis and image basis of m, all exact. Kernel vectors are the
/// standard free-variable basis of the reduced echelon form.
template <Field K>
Elimination<K> eliminate(const Matrix<K>& m) {
  auto ef = row_reduce(m);
  Elimination<K> out;
  out.rank = ef.pivots.size();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : ef.pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec<K> v(m.cols());
    v[f] = K(1);
    for (std::size_t i = 0; i < ef.pivots.size(); ++i) v[ef.pivots[i]] = -ef.reduced(i, f);
    out.kernel_basis.push_back(std::move(v));
  }
  for (auto p : ef.pivots) out.image_basis.push_back(m.column(p));
  return out;
}

template <Field K>
std::size_t rank(const Matrix<K>& m) {
  return row_reduce(m).pivots.size();
}

/// Some x with m x = b, or nullopt when b is not in the image.
template <Field K>
std::optional<Vec<K>> solve(const Matrix<K>& m, std::span<const K> b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: right-hand side has wrong length");
  Matrix<K> aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  auto ef = row_reduce(std::move(aug));
  if (!ef.pivots.empty() && ef.pivots.back() == m.cols()) return std::nullopt;
  Vec<K> x(m.cols());
  for (std::size_t i = 0; i < ef.pivots.size(); ++i) x[ef.pivots[i]] = ef.reduced(i, m.cols());
  return x;
}

template <Field K>
std::optional<Vec<K>> solve(const Matrix<K>& m, const Vec<K>& b) {
  return solve(m, std::span<const K>(b));
}

/// Inverse of a square matrix, or nullopt if singular.
template <Field K>
std::optional<Matrix<K>> inverse(const Matrix<K>& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const std::size_t n = m.rows();
  Matrix<K> aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = K(1);
  }
  auto ef = row_reduce(std::move(aug));
  if (ef.pivots.size() < n || (n > 0 && ef.pivots[n - 1] != n - 1)) return std::nullopt;
  Matrix<K> inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = ef.reduced(r, n + c);
  return inv;
}

/// Indices of a maximal linearly independent subfamily, chosen greedily in order.
template <Field K>
std::vector<std::size_t> independent_subset(const std::vector<Vec<K>>& vectors, std::size_t length) {
  if (vectors.empty()) return {};
  auto ef = row_reduce(Matrix<K>::from_columns(vectors, length));
  return ef.pivots;
}

/// Coordinates of v in the given (independent) basis, or nullopt if v is outside its span.
template <Field K>
std::optional<Vec<K>> coordinates(const std::vector<Vec<K>>& basis, std::span<const K> v) {
  if (basis.empty()) {
    if (is_zero(v)) return Vec<K>{};
    return std::nullopt;
  }
  return solve(Matrix<K>::from_columns(basis, v.size()), v);
}

}  // namespace kmd
