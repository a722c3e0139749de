#pragma once

#include "duomagma/magma.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace duomagma {

/// The normal form {f : measure(f^-1(inner)) > 1 - eps} of a unit
/// neighbourhood in HM0(X). `whole` marks the vacuous case where every
/// element qualifies (inner is then Neighborhood::whole() and eps is 1).
struct NormalizedUnitNbhd {
  Neighborhood inner;
  Rational eps;
  bool whole = false;

  /// The same set written as a subbasic neighbourhood over [0,1).
  Neighborhood as_subbasic() const;
};

StepFunction step_canonicalize(std::vector<StepFunction::Piece> raw);

/// Pointwise product over the union of both breakpoint sets.
StepFunction hm_product(const Magma& base, const StepFunction& f, const StepFunction& g);

/// i_x: the unit on [0,1/2) and x on [1/2,1).
StepFunction hm_embed(const Magma& base, const Element& x);

/// Unit-preserving homomorphism between finite magmas, given by symbol.
class FiniteHomomorphism {
 public:
  /// Checks totality, h(1) = 1 and h(xy) = h(x)h(y) exhaustively; throws
  /// NotAHomomorphism on failure.
  FiniteHomomorphism(MagmaPtr source, MagmaPtr target, std::map<std::string, std::string> map);

  const Magma& source() const { return *source_; }
  const Magma& target() const { return *target_; }
  Element operator()(const Element& x) const;

 private:
  MagmaPtr source_;
  MagmaPtr target_;
  std::map<std::string, std::string> map_;
};

/// HM(h): f -> h o f.
StepFunction hm_map(const FiniteHomomorphism& h, const StepFunction& f);

/// Exact Lebesgue measure of {t in [a,b) : f(t) not in v}.
Rational hm_measure_defect(const Magma& base, const StepFunction& f, const Neighborhood& v,
                           const Rational& a, const Rational& b);

/// Strict test: defect < eps.
bool hm_nbhd_member(const Magma& base, const StepFunction& f, const Neighborhood::HMSubbasic& n);

/// Flattens a neighbourhood of the unit in HM0(base) into its subbasic parts.
/// Whole yields no parts; anything that is not built from subbasic sets is a
/// NormalizationError.
std::vector<Neighborhood::HMSubbasic> subbasic_parts(const Neighborhood& u);

/// Drops vacuous parts (eps > b - a), intersects the inner sets of the rest
/// and takes the minimum eps. Throws NotUnitNeighborhood if a remaining part
/// excludes the base unit.
NormalizedUnitNbhd hm_nbhd_normalize(const Magma& base,
                                     const std::vector<Neighborhood::HMSubbasic>& parts);

bool normalized_member(const Magma& base, const StepFunction& f, const NormalizedUnitNbhd& n);

/// f o s^k. Breakpoints move through s^-k; values are untouched.
StepFunction alpha_apply(const StepFunction& f, std::int64_t k, const SqueezeMap& s);

/// Length of the longest prefix [0, b) on which f takes values in `inner`.
Rational inner_prefix_length(const Magma& base, const StepFunction& f, const Neighborhood& inner);

/// Smallest n with s^n(1 - eps) below the inner prefix length of f. Always
/// sufficient: f o s^n then lies in the normalized neighbourhood.
std::int64_t absorb_exponent_bound(const Magma& base, const StepFunction& f,
                                   const NormalizedUnitNbhd& n, const SqueezeMap& s);

/// Least n >= 0 with f o s^n in the normalized neighbourhood. Throws NotInHM0
/// when f(0) is not the unit.
std::int64_t absorb_exponent(const Magma& base, const StepFunction& f,
                             const NormalizedUnitNbhd& n, const SqueezeMap& s);

}  // namespace duomagma
