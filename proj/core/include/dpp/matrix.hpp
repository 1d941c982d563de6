#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpp/scalar.hpp"

namespace dpp {

// Strictly increasing row/column positions selecting a principal submatrix.
using SubsetIndex = std::vector<int>;

inline void check_subset_index(const SubsetIndex& s, int dim) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 0 || s[k] >= dim) {
      throw std::out_of_range("subset index " + std::to_string(s[k]) +
                              " outside dimension " + std::to_string(dim));
    }
    if (k > 0 && s[k] <= s[k - 1]) {
      throw std::invalid_argument("subset indices must be strictly increasing");
    }
  }
}

// Dense row-major matrix over an exact or floating scalar.
template <class S>
class Matrix {
 public:
  Matrix() = default;

  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, scalar_traits<S>::zero()) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  }

  Matrix(int rows, int cols, std::vector<S> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(rows) * cols) {
      throw std::invalid_argument("matrix data size does not match dimensions");
    }
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = scalar_traits<S>::one();
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  S& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const S& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  const std::vector<S>& data() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix submatrix(const SubsetIndex& rows, const SubsetIndex& cols) const {
    check_subset_index(rows, rows_);
    check_subset_index(cols, cols_);
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = (*this)(rows[i], cols[j]);
    return m;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const S& c) {
    for (auto& x : data_) x *= c;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& c) { return a *= c; }
  friend Matrix operator*(const S& c, Matrix a) { return a *= c; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
      for (int k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (scalar_traits<S>::is_zero(aik)) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<S> data_;
};

// Skew-symmetric square matrix; A(i,j) = -A(j,i), zero diagonal.
// Checked exactly for exact scalars, within a scaled tolerance for floats.
template <class S>
class SkewMatrix {
 public:
  SkewMatrix() = default;

  explicit SkewMatrix(Matrix<S> m, double tol = 1e-12) : m_(std::move(m)) {
    if (!m_.is_square()) throw std::invalid_argument("skew matrix must be square");
    const int n = m_.rows();
    double scale = 1.0;
    if constexpr (!scalar_traits<S>::is_exact) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, scalar_traits<S>::magnitude(m_(i, j)));
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const S defect = m_(i, j) + m_(j, i);
        if constexpr (scalar_traits<S>::is_exact) {
          if (!scalar_traits<S>::is_zero(defect)) throw std::invalid_argument("matrix is not skew-symmetric");
        } else {
          if (scalar_traits<S>::magnitude(defect) > tol * scale)
            throw std::invalid_argument("matrix is not skew-symmetric within tolerance");
        }
      }
    }
  }

  // Builds from the strict upper triangle, mirroring with a sign.
  static SkewMatrix from_upper(int n, const std::vector<S>& upper) {
    if (upper.size() != static_cast<std::size_t>(n) * (n - 1) / 2)
      throw std::invalid_argument("upper triangle size mismatch");
    Matrix<S> m(n, n);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j, ++k) {
        m(i, j) = upper[k];
        m(j, i) = -upper[k];
      }
    }
    SkewMatrix s;
    s.m_ = std::move(m);
    return s;
  }

  int dim() const { return m_.rows(); }
  const S& operator()(int i, int j) const { return m_(i, j); }
  const Matrix<S>& matrix() const { return m_; }

  SkewMatrix principal_submatrix(const SubsetIndex& s) const {
    SkewMatrix out;
    out.m_ = m_.submatrix(s, s);
    return out;
  }

 private:
  Matrix<S> m_;
};

}  // namespace dpp
