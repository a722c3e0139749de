#pragma once

#include "duomagma/magma.hpp"

namespace duomagma {

/// (x,n)*(y,m) = (x . alpha^n(y), n+m) for SemidirectZ and
/// (x,f)*(y,g) = (x + f(y), f o g) for SemidirectAut.
Element sd_multiply(const Magma& m, const Element& p, const Element& q);

/// Requires a group base; NoInverse otherwise.
Element sd_invert(const Magma& m, const Element& p);

/// F(X) = HM0(X) x_alpha Z with alpha = (f -> f o s).
MagmaPtr build_F(MagmaPtr x, const SqueezeMap& s = SqueezeMap::standard());

/// x -> (i_x, 0) for F = build_F(X).
Element embed_into_F(const Magma& f_of_x, const Element& x);

enum class Association {
  Left,   // (s1 * u) * s2
  Right,  // s1 * (u * s2)
};

/// element = s1 * u * s2 with s1, s2 in the canonical countable set
/// ({unit} x Z or {unit} x H) and u in the requested neighbourhood. Both
/// association orders hold; `association` records the one checked first.
struct DuoWitness {
  Element s1;
  Element u;
  Element s2;
  Association association = Association::Left;
};

/// Witness over X x_alpha Z: with n the least absorbing exponent of the target's
/// left factor, s1 = (1,-n), u = (alpha^n(f), 0), s2 = (1, n+m).
DuoWitness duo_witness_z(const Magma& m, const Element& target, const Neighborhood& w);

/// Witness over T^d x H, H grown by the descriptor's absorbing registry.
DuoWitness duo_witness_group(const Magma& m, const Element& target, const Neighborhood& w);

/// True when s lies in the canonical countable set of a built semidirect
/// product: unit left factor, any exponent / any SL(d,Z) automorphism.
bool in_canonical_countable_set(const Magma& m, const Element& s);

}  // namespace duomagma
