#pragma once

#include "duomagma/rational.hpp"

#include <cstdint>
#include <vector>

namespace duomagma {

/// A piecewise-affine contraction s of [0,1): increasing, s(0) = 0,
/// s(t) < t on (0,1), with rational breakpoints and coefficients, so that
/// both s and its inverse map rationals to rationals.
class SqueezeMap {
 public:
  struct Piece {
    Rational start;   // piece covers [start, next start)
    Rational slope;   // > 0
    Rational offset;  // t -> slope * t + offset
    friend bool operator==(const Piece&, const Piece&) = default;
  };

  /// s(t) = t/2 on [0,1/2), (3t-1)/2 on [1/2,1).
  static SqueezeMap standard();

  /// Validates continuity, monotonicity, endpoints and the contraction
  /// property; throws BadSqueezeMap otherwise.
  explicit SqueezeMap(std::vector<Piece> pieces);

  const std::vector<Piece>& pieces() const { return pieces_; }

  Rational apply(const Rational& t) const;
  Rational invert(const Rational& t) const;

  /// s^k(t) for any integer k (negative powers use the inverse).
  Rational power(const Rational& t, std::int64_t k) const;

  friend bool operator==(const SqueezeMap& a, const SqueezeMap& b) {
    return a.pieces_ == b.pieces_;
  }

 private:
  std::vector<Piece> pieces_;
  std::vector<Rational> image_starts_;
};

}  // namespace duomagma
