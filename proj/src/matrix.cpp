#include "duomagma/matrix.hpp"

#include "duomagma/error.hpp"

#include <utility>

namespace duomagma {

namespace {

template <typename R, typename A, typename B>
DenseMatrix<R> multiply_impl(const DenseMatrix<A>& a, const DenseMatrix<B>& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "matrix product dimensions");
  }
  DenseMatrix<R> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) += R(a(i, k)) * R(b(k, j));
      }
    }
  }
  return out;
}

}  // namespace

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  return multiply_impl<Integer>(a, b);
}
RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  return multiply_impl<Rational>(a, b);
}
RationalMatrix multiply(const RationalMatrix& a, const IntMatrix& b) {
  return multiply_impl<Rational>(a, b);
}

RationalMatrix to_rational(const IntMatrix& m) {
  RationalMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

UnimodularMatrix::UnimodularMatrix(IntMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw Error(ErrorCode::NonInvertibleMatrix, "unimodular matrix must be square and non-empty");
  }
  if (determinant(m_) != 1) {
    throw Error(ErrorCode::NonInvertibleMatrix, "determinant is not +1");
  }
}

UnimodularMatrix UnimodularMatrix::identity(std::size_t n) {
  return UnimodularMatrix(IntMatrix::identity(n), Trusted{});
}

UnimodularMatrix UnimodularMatrix::inverse() const {
  // Gauss-Jordan over the rationals; det 1 guarantees an integral result.
  const std::size_t n = size();
  RationalMatrix a = to_rational(m_);
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (a(p, c) == 0) ++p;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(c, j), a(p, j));
        std::swap(inv(c, j), inv(p, j));
      }
    }
    Rational pivot = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= pivot;
      inv(c, j) /= pivot;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      Rational f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  IntMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = inv(i, j).get_num();
  return UnimodularMatrix(std::move(out), Trusted{});
}

std::vector<Rational> UnimodularMatrix::act(const std::vector<Rational>& v, bool mod_one) const {
  if (v.size() != size()) throw Error(ErrorCode::ShapeMismatch, "vector length does not match matrix size");
  std::vector<Rational> out(size(), Rational(0));
  for (std::size_t i = 0; i < size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < size(); ++j) out[j] += v[i] * Rational(m_(i, j));
  }
  if (mod_one) {
    for (auto& x : out) x = frac(x);
  }
  return out;
}

UnimodularMatrix operator*(const UnimodularMatrix& a, const UnimodularMatrix& b) {
  return UnimodularMatrix(multiply(a.m_, b.m_), UnimodularMatrix::Trusted{});
}

}  // namespace duomagma
