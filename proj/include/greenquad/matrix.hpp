#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "greenquad/complex_rational.hpp"
#include "greenquad/error.hpp"

namespace greenquad {

/// Small dense row-major matrix over an arbitrary field scalar. Eigen is used for
/// floating-point linear algebra; this type exists so exact scalars can flow
/// through the same geometric code.
template <typename T>
class dense_matrix {
 public:
  dense_matrix() = default;
  dense_matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  dense_matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      require(r.size() == cols_, errc::invalid_argument, "ragged matrix initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static dense_matrix identity(std::size_t n) {
    dense_matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  dense_matrix adjoint() const {
    dense_matrix a(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) a(j, i) = scalar_traits<T>::conj((*this)(i, j));
    return a;
  }

  friend dense_matrix operator*(const dense_matrix& a, const dense_matrix& b) {
    require(a.cols_ == b.rows_, errc::invalid_argument, "matrix product dimension mismatch");
    dense_matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
  }

  friend dense_matrix operator+(dense_matrix a, const dense_matrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, errc::invalid_argument,
            "matrix sum dimension mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend dense_matrix operator-(dense_matrix a, const dense_matrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, errc::invalid_argument,
            "matrix difference dimension mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend dense_matrix operator*(const T& s, dense_matrix a) {
    for (auto& v : a.data_) v = s * v;
    return a;
  }

  friend bool operator==(const dense_matrix& a, const dense_matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Gauss-Jordan inverse; exact for rational scalars.
template <typename T>
dense_matrix<T> inverse(dense_matrix<T> a) {
  const std::size_t n = a.rows();
  require(a.cols() == n, errc::invalid_argument, "inverse of non-square matrix");
  dense_matrix<T> inv = dense_matrix<T>::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && scalar_traits<T>::is_zero(a(pivot, col))) ++pivot;
    require(pivot < n, errc::invalid_argument, "singular matrix");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(col, j), a(pivot, j));
        std::swap(inv(col, j), inv(pivot, j));
      }
    }
    const T p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) = a(col, j) / p;
      inv(col, j) = inv(col, j) / p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || scalar_traits<T>::is_zero(a(i, col))) continue;
      const T f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace greenquad
