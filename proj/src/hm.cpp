#include "duomagma/hm.hpp"

#include "duomagma/error.hpp"

#include <stdexcept>

namespace duomagma {

Neighborhood NormalizedUnitNbhd::as_subbasic() const {
  return Neighborhood::hm_subbasic(inner, Rational(0), Rational(1), eps);
}

StepFunction step_canonicalize(std::vector<StepFunction::Piece> raw) {
  return StepFunction::canonicalize(std::move(raw));
}

StepFunction hm_product(const Magma& base, const StepFunction& f, const StepFunction& g) {
  const auto& fp = f.pieces();
  const auto& gp = g.pieces();
  std::vector<StepFunction::Piece> out;
  out.reserve(fp.size() + gp.size());
  std::size_t i = 0;
  std::size_t j = 0;
  Rational t = 0;
  while (true) {
    out.push_back({t, op_apply_unchecked(base, fp[i].value, gp[j].value)});
    Rational fe = f.piece_end(i);
    Rational ge = g.piece_end(j);
    if (fe == 1 && ge == 1) break;
    if (fe <= ge) ++i;
    if (ge <= fe) ++j;
    t = fe < ge ? fe : ge;
  }
  return StepFunction::canonicalize(std::move(out));
}

StepFunction hm_embed(const Magma& base, const Element& x) {
  require_member(base, x);
  return StepFunction::canonicalize({{Rational(0), unit_of(base)}, {Rational(1, 2), x}});
}

FiniteHomomorphism::FiniteHomomorphism(MagmaPtr source, MagmaPtr target,
                                       std::map<std::string, std::string> map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
  const auto& s = source_->finite();
  const auto& t = target_->finite();
  for (const auto& name : s.elements) {
    auto it = map_.find(name);
    if (it == map_.end() || !t.find(it->second)) {
      throw Error(ErrorCode::NotAHomomorphism, "map is not total into the target");
    }
  }
  if (map_.at(s.elements[s.unit]) != t.elements[t.unit]) {
    throw Error(ErrorCode::NotAHomomorphism, "unit is not preserved");
  }
  for (std::size_t i = 0; i < s.elements.size(); ++i) {
    for (std::size_t j = 0; j < s.elements.size(); ++j) {
      std::size_t hi = *t.find(map_.at(s.elements[i]));
      std::size_t hj = *t.find(map_.at(s.elements[j]));
      if (map_.at(s.elements[s.table[i][j]]) != t.elements[t.table[hi][hj]]) {
        throw Error(ErrorCode::NotAHomomorphism, "operation is not preserved");
      }
    }
  }
}

Element FiniteHomomorphism::operator()(const Element& x) const {
  auto it = map_.find(x.atom_name());
  if (it == map_.end()) throw Error(ErrorCode::ShapeMismatch, "symbol outside homomorphism domain");
  return Element::atom(it->second);
}

StepFunction hm_map(const FiniteHomomorphism& h, const StepFunction& f) {
  std::vector<StepFunction::Piece> out;
  out.reserve(f.size());
  for (const auto& p : f.pieces()) out.push_back({p.start, h(p.value)});
  return StepFunction::canonicalize(std::move(out));
}

Rational hm_measure_defect(const Magma& base, const StepFunction& f, const Neighborhood& v,
                           const Rational& a, const Rational& b) {
  if (!(0 <= a && a < b && b <= 1)) throw Error(ErrorCode::BadInterval, "need 0 <= a < b <= 1");
  Rational defect = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Rational& lo = f.pieces()[i].start;
    Rational hi = f.piece_end(i);
    if (hi <= a) continue;
    if (lo >= b) break;
    if (nbhd_member(base, v, f.pieces()[i].value)) continue;
    defect += (hi < b ? hi : b) - (lo > a ? lo : a);
  }
  return defect;
}

bool hm_nbhd_member(const Magma& base, const StepFunction& f, const Neighborhood::HMSubbasic& n) {
  return hm_measure_defect(base, f, *n.inner, n.a, n.b) < n.eps;
}

std::vector<Neighborhood::HMSubbasic> subbasic_parts(const Neighborhood& u) {
  switch (u.kind()) {
    case Neighborhood::Kind::HMSubbasic: return {u.hm_subbasic()};
    case Neighborhood::Kind::Whole: return {};
    case Neighborhood::Kind::Intersection: {
      std::vector<Neighborhood::HMSubbasic> out;
      for (const auto& p : u.intersection().parts) {
        auto sub = subbasic_parts(p);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    default:
      throw Error(ErrorCode::NormalizationError,
                  "neighbourhood of HM0 must be built from subbasic sets");
  }
}

NormalizedUnitNbhd hm_nbhd_normalize(const Magma& base,
                                     const std::vector<Neighborhood::HMSubbasic>& parts) {
  const Element unit = unit_of(base);
  std::optional<Neighborhood> inner;
  std::optional<Rational> eps;
  for (const auto& p : parts) {
    if (p.eps > p.b - p.a) continue;  // satisfied by every f
    if (!nbhd_member(base, *p.inner, unit)) {
      throw Error(ErrorCode::NotUnitNeighborhood, "a subbasic part excludes the base unit");
    }
    inner = inner ? nbhd_intersect(*inner, *p.inner) : *p.inner;
    if (!eps || p.eps < *eps) eps = p.eps;
  }
  if (!inner) return {Neighborhood::whole(), Rational(1), true};
  return {*inner, *eps, false};
}

bool normalized_member(const Magma& base, const StepFunction& f, const NormalizedUnitNbhd& n) {
  if (n.whole) return true;
  return hm_measure_defect(base, f, n.inner, Rational(0), Rational(1)) < n.eps;
}

StepFunction alpha_apply(const StepFunction& f, std::int64_t k, const SqueezeMap& s) {
  if (k == 0) return f;
  std::vector<StepFunction::Piece> out;
  out.reserve(f.size());
  for (const auto& p : f.pieces()) out.push_back({s.power(p.start, -k), p.value});
  return StepFunction::canonicalize(std::move(out));
}

Rational inner_prefix_length(const Magma& base, const StepFunction& f, const Neighborhood& inner) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!nbhd_member(base, inner, f.pieces()[i].value)) return f.pieces()[i].start;
  }
  return Rational(1);
}

namespace {

void require_hm0(const Magma& base, const StepFunction& f) {
  if (f.pieces().front().value != unit_of(base)) {
    throw Error(ErrorCode::NotInHM0, "f(0) is not the unit");
  }
}

}  // namespace

std::int64_t absorb_exponent_bound(const Magma& base, const StepFunction& f,
                                   const NormalizedUnitNbhd& n, const SqueezeMap& s) {
  require_hm0(base, f);
  if (n.whole || n.eps >= 1) return 0;
  Rational prefix = inner_prefix_length(base, f, n.inner);
  if (prefix == 0) throw Error(ErrorCode::NotUnitNeighborhood, "inner set excludes the unit");
  if (prefix == 1) return 0;
  std::int64_t steps = 0;
  for (Rational t = 1 - n.eps; t >= prefix; t = s.apply(t)) ++steps;
  return steps;
}

std::int64_t absorb_exponent(const Magma& base, const StepFunction& f, const NormalizedUnitNbhd& n,
                             const SqueezeMap& s) {
  const std::int64_t bound = absorb_exponent_bound(base, f, n, s);
  StepFunction g = f;
  for (std::int64_t k = 0; k <= bound; ++k) {
    if (normalized_member(base, g, n)) return k;
    g = alpha_apply(g, 1, s);
  }
  throw std::logic_error("absorbing exponent bound did not yield a member");
}

}  // namespace duomagma
