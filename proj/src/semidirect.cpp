#include "duomagma/semidirect.hpp"

#include "duomagma/error.hpp"
#include "duomagma/hm.hpp"
#include "duomagma/unimodular.hpp"

#include <stdexcept>

namespace duomagma {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorCode::ShapeMismatch, "exponent overflow");
  return out;
}

void post_verify(const Magma& m, const Element& target, const Neighborhood& w, const DuoWitness& wit) {
  if (!nbhd_member(m, w, wit.u)) throw std::logic_error("witness u left the neighbourhood");
  if (sd_multiply(m, sd_multiply(m, wit.s1, wit.u), wit.s2) != target ||
      sd_multiply(m, wit.s1, sd_multiply(m, wit.u, wit.s2)) != target) {
    throw std::logic_error("witness product does not reproduce the target");
  }
}

}  // namespace

Element sd_multiply(const Magma& m, const Element& p, const Element& q) {
  require_member(m, p);
  require_member(m, q);
  if (m.kind() == Magma::Kind::SemidirectZ) {
    const auto& sz = m.semidirect_z();
    const Magma& hm = *sz.base;
    const std::int64_t n = p.exponent();
    Element twisted = Element::step(alpha_apply(q.left().step(), n, sz.squeeze));
    return Element::pair(op_apply_unchecked(hm, p.left(), twisted), checked_add(n, q.exponent()));
  }
  if (m.kind() == Magma::Kind::SemidirectAut) {
    const Magma& base = *m.semidirect_aut().base;
    const auto& f = p.automorphism();
    const auto& g = q.automorphism();
    Element fy = Element::torus(f.act(q.left().coords(), true));
    // matrices act on row vectors, so f o g is represented by G * F
    return Element::pair(op_apply_unchecked(base, p.left(), fy), g * f);
  }
  throw Error(ErrorCode::ShapeMismatch, "not a semidirect product");
}

Element sd_invert(const Magma& m, const Element& p) {
  require_member(m, p);
  if (m.kind() == Magma::Kind::SemidirectZ) {
    const auto& sz = m.semidirect_z();
    const Magma& hm = *sz.base;
    Element inv = inverse_of(hm, p.left());
    const std::int64_t n = p.exponent();
    return Element::pair(Element::step(alpha_apply(inv.step(), -n, sz.squeeze)), -n);
  }
  if (m.kind() == Magma::Kind::SemidirectAut) {
    const Magma& base = *m.semidirect_aut().base;
    UnimodularMatrix finv = p.automorphism().inverse();
    Element neg = inverse_of(base, p.left());
    return Element::pair(Element::torus(finv.act(neg.coords(), true)), finv);
  }
  throw Error(ErrorCode::ShapeMismatch, "not a semidirect product");
}

MagmaPtr build_F(MagmaPtr x, const SqueezeMap& s) { return semidirect_z(hm0_of(std::move(x), s), s); }

Element embed_into_F(const Magma& f_of_x, const Element& x) {
  const Magma& base = *f_of_x.semidirect_z().base->hm0().base;
  return Element::pair(Element::step(hm_embed(base, x)), std::int64_t{0});
}

DuoWitness duo_witness_z(const Magma& m, const Element& target, const Neighborhood& w) {
  const auto& sz = m.semidirect_z();
  require_member(m, target);
  if (w.kind() != Neighborhood::Kind::ProductDiscrete) {
    throw Error(ErrorCode::NormalizationError, "witness neighbourhood must be a product with the discrete unit");
  }
  const Magma& hm = *sz.base;
  const Magma& base = *hm.hm0().base;
  NormalizedUnitNbhd normal = hm_nbhd_normalize(base, subbasic_parts(*w.product_discrete().base));
  const StepFunction& f = target.left().step();
  const std::int64_t n = absorb_exponent(base, f, normal, sz.squeeze);

  const Element unit = unit_of(hm);
  DuoWitness wit{Element::pair(unit, -n), Element::pair(Element::step(alpha_apply(f, n, sz.squeeze)), std::int64_t{0}),
                 Element::pair(unit, checked_add(n, target.exponent())), Association::Left};
  post_verify(m, target, w, wit);
  return wit;
}

DuoWitness duo_witness_group(const Magma& m, const Element& target, const Neighborhood& w) {
  const auto& sa = m.semidirect_aut();
  require_member(m, target);
  if (w.kind() != Neighborhood::Kind::ProductDiscrete) {
    throw Error(ErrorCode::NormalizationError, "witness neighbourhood must be a product with the discrete unit");
  }
  const Magma& base = *sa.base;
  const auto& x = target.left();
  auto absorbed = sa.registry->absorb({x.coords()}, *w.product_discrete().base);
  const UnimodularMatrix& shrink = absorbed.shrink;  // x * shrink lies in the box
  const Element zero = unit_of(base);
  const std::size_t d = base.dim();
  DuoWitness wit{Element::pair(zero, shrink.inverse()),
                 Element::pair(Element::torus(shrink.act(x.coords(), true)), UnimodularMatrix::identity(d)),
                 Element::pair(zero, target.automorphism() * shrink), Association::Left};
  post_verify(m, target, w, wit);
  return wit;
}

bool in_canonical_countable_set(const Magma& m, const Element& s) {
  if (m.kind() == Magma::Kind::SemidirectZ) {
    return belongs(m, s) && s.left() == unit_of(*m.semidirect_z().base);
  }
  if (m.kind() == Magma::Kind::SemidirectAut) {
    return belongs(m, s) && s.left() == unit_of(*m.semidirect_aut().base);
  }
  return false;
}

}  // namespace duomagma
