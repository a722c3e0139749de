#pragma once

#include "duomagma/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace duomagma {

// Dense row-major matrices over exact scalars. Sizes here are tiny (at most a
// few dozen rows), so no attempt is made at blocking or sparsity.
template <typename Scalar>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Scalar(0)) {}
  DenseMatrix(std::initializer_list<std::initializer_list<Scalar>> rows);

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Scalar> row(std::size_t r) const {
    return {data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_};
  }
  std::vector<Scalar> col(std::size_t c) const {
    std::vector<Scalar> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

template <typename Scalar>
DenseMatrix<Scalar>::DenseMatrix(std::initializer_list<std::initializer_list<Scalar>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    for (const auto& v : r) data_.push_back(v);
  }
}

using IntMatrix = DenseMatrix<Integer>;
using RationalMatrix = DenseMatrix<Rational>;

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix multiply(const RationalMatrix& a, const IntMatrix& b);
RationalMatrix to_rational(const IntMatrix& m);

/// Exact determinant by fraction-free (Bareiss) elimination.
Integer determinant(const IntMatrix& m);

/// Square integer matrix with determinant exactly +1.
class UnimodularMatrix {
 public:
  /// Throws NonInvertibleMatrix unless `m` is square with det == 1.
  explicit UnimodularMatrix(IntMatrix m);
  static UnimodularMatrix identity(std::size_t n);

  std::size_t size() const { return m_.rows(); }
  const IntMatrix& matrix() const { return m_; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  UnimodularMatrix inverse() const;

  /// Row vector times matrix, reduced mod 1 when `mod_one` is set.
  std::vector<Rational> act(const std::vector<Rational>& v, bool mod_one) const;

  friend UnimodularMatrix operator*(const UnimodularMatrix& a, const UnimodularMatrix& b);
  friend bool operator==(const UnimodularMatrix& a, const UnimodularMatrix& b) {
    return a.m_ == b.m_;
  }

 private:
  struct Trusted {};
  UnimodularMatrix(IntMatrix m, Trusted) : m_(std::move(m)) {}
  IntMatrix m_;
};

}  // namespace duomagma
