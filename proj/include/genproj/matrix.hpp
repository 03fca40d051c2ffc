#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "genproj/errors.hpp"
#include "genproj/scalar.hpp"

namespace genproj {

template <class S>
using Vec = std::vector<S>;

using CVec = Vec<cplx>;
using QVec = Vec<GaussRational>;

/// Dense row-major matrix. S is `cplx` on the float path and
/// `GaussRational` on the exact path.
template <class S>
class Matrix {
public:
  using value_type = S;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  /// Row-major initializer; throws DimensionMismatch if the row lengths differ.
  Matrix(std::initializer_list<std::initializer_list<S>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionMismatch("Matrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix from_rows(const std::vector<Vec<S>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (rows[i].size() != m.cols_) throw DimensionMismatch("Matrix: ragged rows");
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * m.cols_);
    }
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<S> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const S> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Vec<S> row_vec(std::size_t i) const {
    auto r = row(i);
    return Vec<S>(r.begin(), r.end());
  }

  Vec<S> col_vec(std::size_t j) const {
    Vec<S> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  const std::vector<S>& data() const noexcept { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Rows of `a` followed by rows of `b`.
  static Matrix stack(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.cols_ && !a.empty() && !b.empty())
      throw DimensionMismatch("Matrix::stack: column counts differ");
    Matrix m(a.rows_ + b.rows_, a.empty() ? b.cols_ : a.cols_);
    std::copy(a.data_.begin(), a.data_.end(), m.data_.begin());
    std::copy(b.data_.begin(), b.data_.end(), m.data_.begin() + a.data_.size());
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("Matrix product: inner dimensions differ");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Vec<S> operator*(const Matrix& a, const Vec<S>& x) {
    if (a.cols_ != x.size()) throw DimensionMismatch("Matrix-vector product: size mismatch");
    Vec<S> y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("Matrix sum: shape mismatch");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("Matrix difference: shape mismatch");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }

  friend Matrix operator*(const S& s, Matrix a) {
    for (auto& v : a.data_) v = s * v;
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

using CMat = Matrix<cplx>;
using QMat = Matrix<GaussRational>;

inline CMat to_complex(const QMat& m) {
  CMat c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j).to_complex();
  return c;
}

inline CVec to_complex(const QVec& v) {
  CVec c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i].to_complex();
  return c;
}

inline Eigen::MatrixXcd to_eigen(const CMat& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(Eigen::Index(i), Eigen::Index(j)) = m(i, j);
  return e;
}

inline CMat from_eigen(const Eigen::MatrixXcd& e) {
  CMat m(std::size_t(e.rows()), std::size_t(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(std::size_t(i), std::size_t(j)) = e(i, j);
  return m;
}

inline double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

inline double norm_inf(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& x : v) s = std::max(s, std::abs(x));
  return s;
}

/// Frobenius norm.
inline double norm_fro(const CMat& m) { return norm2(m.data()); }

inline double max_abs(const CMat& m) { return norm_inf(m.data()); }

inline CVec operator-(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector difference: size mismatch");
  CVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

inline CVec operator+(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector sum: size mismatch");
  CVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

inline CVec operator*(cplx s, CVec v) {
  for (auto& x : v) x *= s;
  return v;
}

}  // namespace genproj
