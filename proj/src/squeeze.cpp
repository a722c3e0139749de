#include "duomagma/squeeze.hpp"

#include "duomagma/error.hpp"

#include <algorithm>

namespace duomagma {

SqueezeMap SqueezeMap::standard() {
  return SqueezeMap({{Rational(0), Rational(1, 2), Rational(0)},
                     {Rational(1, 2), Rational(3, 2), Rational(-1, 2)}});
}

SqueezeMap::SqueezeMap(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.size() < 2) {
    throw Error(ErrorCode::BadSqueezeMap, "need at least two affine pieces for s(t) < t");
  }
  if (pieces_.front().start != 0) throw Error(ErrorCode::BadSqueezeMap, "first piece must start at 0");
  if (pieces_.front().offset != 0) throw Error(ErrorCode::BadSqueezeMap, "s(0) must be 0");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (p.slope <= 0) throw Error(ErrorCode::BadSqueezeMap, "slopes must be positive");
    if (i > 0) {
      const auto& q = pieces_[i - 1];
      if (p.start <= q.start || p.start >= 1) {
        throw Error(ErrorCode::BadSqueezeMap, "breakpoints must increase inside (0,1)");
      }
      if (q.slope * p.start + q.offset != p.slope * p.start + p.offset) {
        throw Error(ErrorCode::BadSqueezeMap, "map is discontinuous at a breakpoint");
      }
      if (p.slope * p.start + p.offset >= p.start) {
        throw Error(ErrorCode::BadSqueezeMap, "s(t) < t fails at a breakpoint");
      }
    }
  }
  if (pieces_.back().slope + pieces_.back().offset != 1) {
    throw Error(ErrorCode::BadSqueezeMap, "s must tend to 1 at 1");
  }
  image_starts_.reserve(pieces_.size());
  for (const auto& p : pieces_) image_starts_.push_back(p.slope * p.start + p.offset);
}

Rational SqueezeMap::apply(const Rational& t) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](const Rational& v, const Piece& p) { return v < p.start; });
  const Piece& p = *std::prev(it);
  return p.slope * t + p.offset;
}

Rational SqueezeMap::invert(const Rational& t) const {
  auto it = std::upper_bound(image_starts_.begin(), image_starts_.end(), t);
  const Piece& p = pieces_[static_cast<std::size_t>(std::distance(image_starts_.begin(), it)) - 1];
  return (t - p.offset) / p.slope;
}

Rational SqueezeMap::power(const Rational& t, std::int64_t k) const {
  Rational x = t;
  for (; k > 0; --k) x = apply(x);
  for (; k < 0; ++k) x = invert(x);
  return x;
}

}  // namespace duomagma
