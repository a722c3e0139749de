#include "duomagma/magma.hpp"

#include "duomagma/error.hpp"
#include "duomagma/hm.hpp"
#include "duomagma/semidirect.hpp"
#include "duomagma/unimodular.hpp"

#include <algorithm>
#include <set>

namespace duomagma {

std::optional<std::size_t> Magma::Finite::find(const std::string& name) const {
  auto it = index.find(name);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

const Magma::Finite& Magma::finite() const {
  if (auto* f = std::get_if<Finite>(&rep_)) return *f;
  throw Error(ErrorCode::ShapeMismatch, "descriptor is not a finite magma");
}

std::size_t Magma::dim() const {
  if (auto* v = std::get_if<Vector>(&rep_)) return v->dim;
  if (auto* t = std::get_if<Torus>(&rep_)) return t->dim;
  throw Error(ErrorCode::ShapeMismatch, "descriptor has no dimension");
}

const Magma::HM0& Magma::hm0() const {
  if (auto* h = std::get_if<HM0>(&rep_)) return *h;
  throw Error(ErrorCode::ShapeMismatch, "descriptor is not HM0");
}

const Magma::SemidirectZ& Magma::semidirect_z() const {
  if (auto* s = std::get_if<SemidirectZ>(&rep_)) return *s;
  throw Error(ErrorCode::ShapeMismatch, "descriptor is not a semidirect product with Z");
}

const Magma::SemidirectAut& Magma::semidirect_aut() const {
  if (auto* s = std::get_if<SemidirectAut>(&rep_)) return *s;
  throw Error(ErrorCode::ShapeMismatch, "descriptor is not a semidirect product with H");
}

MagmaPtr mk_finite_magma(const std::vector<std::string>& elements,
                         const std::vector<std::vector<std::string>>& table,
                         const std::string& unit) {
  Magma::Finite f;
  f.elements = elements;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!f.index.emplace(elements[i], i).second) {
      throw Error(ErrorCode::UnknownSymbol, "duplicate symbol '" + elements[i] + "'");
    }
  }
  const std::size_t n = elements.size();
  if (n == 0) throw Error(ErrorCode::UnknownSymbol, "empty element list");
  if (table.size() != n) throw Error(ErrorCode::ShapeMismatch, "table must have |elements| rows");
  auto lookup = [&](const std::string& s) {
    auto i = f.find(s);
    if (!i) throw Error(ErrorCode::UnknownSymbol, "symbol '" + s + "' not in element list");
    return *i;
  };
  f.unit = lookup(unit);
  f.table.assign(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) throw Error(ErrorCode::ShapeMismatch, "table must be square");
    for (std::size_t j = 0; j < n; ++j) f.table[i][j] = lookup(table[i][j]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (f.table[f.unit][i] != i || f.table[i][f.unit] != i) {
      throw Error(ErrorCode::UnitLawViolation,
                  "'" + unit + "' is not a two-sided unit for '" + elements[i] + "'");
    }
  }
  f.associative = true;
  for (std::size_t a = 0; a < n && f.associative; ++a)
    for (std::size_t b = 0; b < n && f.associative; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (f.table[f.table[a][b]][c] != f.table[a][f.table[b][c]]) {
          f.associative = false;
          break;
        }
  return std::make_shared<const Magma>(std::move(f));
}

MagmaPtr cyclic_group(std::size_t order, std::vector<std::string> symbols) {
  if (order == 0) throw Error(ErrorCode::ShapeMismatch, "cyclic group of order 0");
  if (symbols.empty()) {
    for (std::size_t i = 0; i < order; ++i) symbols.push_back(std::to_string(i));
  }
  if (symbols.size() != order) throw Error(ErrorCode::ShapeMismatch, "symbol count must equal the order");
  std::vector<std::vector<std::string>> table(order, std::vector<std::string>(order));
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = 0; j < order; ++j) table[i][j] = symbols[(i + j) % order];
  return mk_finite_magma(symbols, table, symbols[0]);
}

MagmaPtr rational_vector_group(std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::ShapeMismatch, "dimension must be positive");
  return std::make_shared<const Magma>(Magma::Vector{dim});
}

MagmaPtr rational_torus(std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::ShapeMismatch, "dimension must be positive");
  return std::make_shared<const Magma>(Magma::Torus{dim});
}

MagmaPtr hm0_of(MagmaPtr base, SqueezeMap squeeze) {
  if (!base) throw Error(ErrorCode::ShapeMismatch, "null base descriptor");
  return std::make_shared<const Magma>(Magma::HM0{std::move(base), std::move(squeeze)});
}

MagmaPtr semidirect_z(MagmaPtr hm0_base, SqueezeMap squeeze) {
  if (!hm0_base || hm0_base->kind() != Magma::Kind::HM0) {
    throw Error(ErrorCode::ShapeMismatch, "semidirect product with Z needs an HM0 base");
  }
  return std::make_shared<const Magma>(Magma::SemidirectZ{std::move(hm0_base), std::move(squeeze)});
}

MagmaPtr semidirect_aut(MagmaPtr torus_base, std::shared_ptr<AbsorbingFamilyRegistry> registry) {
  if (!torus_base || torus_base->kind() != Magma::Kind::Torus) {
    throw Error(ErrorCode::ShapeMismatch, "semidirect product with H needs a torus base");
  }
  if (!registry || registry->dimension() != torus_base->dim()) {
    throw Error(ErrorCode::ShapeMismatch, "registry dimension does not match the torus");
  }
  return std::make_shared<const Magma>(Magma::SemidirectAut{std::move(torus_base), std::move(registry)});
}

Element unit_of(const Magma& m) {
  switch (m.kind()) {
    case Magma::Kind::Finite: {
      const auto& f = m.finite();
      return Element::atom(f.elements[f.unit]);
    }
    case Magma::Kind::Vector: return Element::vector(std::vector<Rational>(m.dim(), Rational(0)));
    case Magma::Kind::Torus: return Element::torus(std::vector<Rational>(m.dim(), Rational(0)));
    case Magma::Kind::HM0: return Element::step(StepFunction::constant(unit_of(*m.hm0().base)));
    case Magma::Kind::SemidirectZ:
      return Element::pair(unit_of(*m.semidirect_z().base), std::int64_t{0});
    case Magma::Kind::SemidirectAut: {
      const auto& base = *m.semidirect_aut().base;
      return Element::pair(unit_of(base), UnimodularMatrix::identity(base.dim()));
    }
  }
  throw Error(ErrorCode::ShapeMismatch, "unknown descriptor");
}

bool belongs(const Magma& m, const Element& x) {
  switch (m.kind()) {
    case Magma::Kind::Finite:
      return x.kind() == Element::Kind::Atom && m.finite().find(x.atom_name()).has_value();
    case Magma::Kind::Vector:
      return x.kind() == Element::Kind::Vector && x.coords().size() == m.dim();
    case Magma::Kind::Torus:
      return x.kind() == Element::Kind::Torus && x.coords().size() == m.dim();
    case Magma::Kind::HM0: {
      if (x.kind() != Element::Kind::Step) return false;
      const Magma& base = *m.hm0().base;
      const auto& pieces = x.step().pieces();
      if (pieces.front().value != unit_of(base)) return false;
      return std::all_of(pieces.begin(), pieces.end(),
                         [&](const StepFunction::Piece& p) { return belongs(base, p.value); });
    }
    case Magma::Kind::SemidirectZ:
      return x.kind() == Element::Kind::Pair &&
             std::holds_alternative<std::int64_t>(x.right()) &&
             belongs(*m.semidirect_z().base, x.left());
    case Magma::Kind::SemidirectAut: {
      if (x.kind() != Element::Kind::Pair) return false;
      const auto* a = std::get_if<UnimodularMatrix>(&x.right());
      const Magma& base = *m.semidirect_aut().base;
      return a && a->size() == base.dim() && belongs(base, x.left());
    }
  }
  return false;
}

void require_member(const Magma& m, const Element& x) {
  if (!belongs(m, x)) throw Error(ErrorCode::ShapeMismatch, "element does not belong to the magma");
}

bool is_associative(const Magma& m) {
  switch (m.kind()) {
    case Magma::Kind::Finite: return m.finite().associative;
    case Magma::Kind::Vector:
    case Magma::Kind::Torus:
    case Magma::Kind::SemidirectAut: return true;
    case Magma::Kind::HM0: return is_associative(*m.hm0().base);
    case Magma::Kind::SemidirectZ: return is_associative(*m.semidirect_z().base);
  }
  return false;
}

bool is_group(const Magma& m) {
  switch (m.kind()) {
    case Magma::Kind::Finite: {
      const auto& f = m.finite();
      if (!f.associative) return false;
      for (std::size_t i = 0; i < f.elements.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < f.elements.size() && !found; ++j) {
          found = f.table[i][j] == f.unit && f.table[j][i] == f.unit;
        }
        if (!found) return false;
      }
      return true;
    }
    case Magma::Kind::Vector:
    case Magma::Kind::Torus:
    case Magma::Kind::SemidirectAut: return true;
    case Magma::Kind::HM0: return is_group(*m.hm0().base);
    case Magma::Kind::SemidirectZ: return is_group(*m.semidirect_z().base);
  }
  return false;
}

Element op_apply_unchecked(const Magma& m, const Element& x, const Element& y) {
  switch (m.kind()) {
    case Magma::Kind::Finite: {
      const auto& f = m.finite();
      return Element::atom(f.elements[f.table[*f.find(x.atom_name())][*f.find(y.atom_name())]]);
    }
    case Magma::Kind::Vector:
    case Magma::Kind::Torus: {
      std::vector<Rational> out = x.coords();
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += y.coords()[i];
      return m.kind() == Magma::Kind::Torus ? Element::torus(std::move(out))
                                            : Element::vector(std::move(out));
    }
    case Magma::Kind::HM0: return Element::step(hm_product(*m.hm0().base, x.step(), y.step()));
    case Magma::Kind::SemidirectZ:
    case Magma::Kind::SemidirectAut: return sd_multiply(m, x, y);
  }
  throw Error(ErrorCode::ShapeMismatch, "unknown descriptor");
}

Element op_apply(const Magma& m, const Element& x, const Element& y) {
  require_member(m, x);
  require_member(m, y);
  return op_apply_unchecked(m, x, y);
}

Element inverse_of(const Magma& m, const Element& x) {
  if (!is_group(m)) throw Error(ErrorCode::NoInverse, "base is not a group");
  require_member(m, x);
  switch (m.kind()) {
    case Magma::Kind::Finite: {
      const auto& f = m.finite();
      std::size_t i = *f.find(x.atom_name());
      for (std::size_t j = 0; j < f.elements.size(); ++j) {
        if (f.table[i][j] == f.unit) return Element::atom(f.elements[j]);
      }
      break;
    }
    case Magma::Kind::Vector:
    case Magma::Kind::Torus: {
      std::vector<Rational> out = x.coords();
      for (auto& c : out) c = -c;
      return m.kind() == Magma::Kind::Torus ? Element::torus(std::move(out))
                                            : Element::vector(std::move(out));
    }
    case Magma::Kind::HM0: {
      std::vector<StepFunction::Piece> pieces;
      for (const auto& p : x.step().pieces()) {
        pieces.push_back({p.start, inverse_of(*m.hm0().base, p.value)});
      }
      return Element::step(StepFunction::canonicalize(std::move(pieces)));
    }
    case Magma::Kind::SemidirectZ:
    case Magma::Kind::SemidirectAut: return sd_invert(m, x);
  }
  throw Error(ErrorCode::NoInverse, "no inverse found");
}

// --- neighbourhoods ---------------------------------------------------------

Neighborhood Neighborhood::eps_box(Rational eps, std::vector<std::size_t> coords) {
  if (eps <= 0) throw Error(ErrorCode::SchemaError, "eps must be positive");
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  return Neighborhood(EpsBox{std::move(eps), std::move(coords)});
}

Neighborhood Neighborhood::subset(std::vector<Element> members) {
  return Neighborhood(Subset{std::move(members)});
}

Neighborhood Neighborhood::hm_subbasic(Neighborhood inner, Rational a, Rational b, Rational eps) {
  if (!(0 <= a && a < b && b <= 1)) throw Error(ErrorCode::BadInterval, "need 0 <= a < b <= 1");
  if (eps <= 0) throw Error(ErrorCode::SchemaError, "eps must be positive");
  return Neighborhood(HMSubbasic{std::make_shared<const Neighborhood>(std::move(inner)), std::move(a),
                                 std::move(b), std::move(eps)});
}

Neighborhood Neighborhood::intersection(std::vector<Neighborhood> parts) {
  if (parts.empty()) throw Error(ErrorCode::SchemaError, "intersection needs at least one part");
  return Neighborhood(Intersection{std::move(parts)});
}

Neighborhood Neighborhood::product_discrete(Neighborhood base) {
  return Neighborhood(ProductDiscrete{std::make_shared<const Neighborhood>(std::move(base))});
}

Neighborhood Neighborhood::whole() { return Neighborhood(Whole{}); }

bool operator==(const Neighborhood& a, const Neighborhood& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Neighborhood::Kind::EpsBox: return a.eps_box() == b.eps_box();
    case Neighborhood::Kind::Subset: return a.subset().members == b.subset().members;
    case Neighborhood::Kind::HMSubbasic: {
      const auto& x = a.hm_subbasic();
      const auto& y = b.hm_subbasic();
      return x.a == y.a && x.b == y.b && x.eps == y.eps && *x.inner == *y.inner;
    }
    case Neighborhood::Kind::Intersection: return a.intersection().parts == b.intersection().parts;
    case Neighborhood::Kind::ProductDiscrete:
      return *a.product_discrete().base == *b.product_discrete().base;
    case Neighborhood::Kind::Whole: return true;
  }
  return false;
}

namespace {

bool discrete_unit(const Magma& m, const Element& x) {
  if (m.kind() == Magma::Kind::SemidirectZ) return x.exponent() == 0;
  if (m.kind() == Magma::Kind::SemidirectAut) {
    return x.automorphism() == UnimodularMatrix::identity(x.automorphism().size());
  }
  throw Error(ErrorCode::ShapeMismatch, "product-with-discrete neighbourhood needs a semidirect product");
}

const Magma& left_factor(const Magma& m) {
  if (m.kind() == Magma::Kind::SemidirectZ) return *m.semidirect_z().base;
  return *m.semidirect_aut().base;
}

}  // namespace

bool nbhd_member(const Magma& m, const Neighborhood& u, const Element& x) {
  require_member(m, x);
  switch (u.kind()) {
    case Neighborhood::Kind::EpsBox: {
      if (m.kind() != Magma::Kind::Vector && m.kind() != Magma::Kind::Torus) {
        throw Error(ErrorCode::ShapeMismatch, "eps-box needs a vector group or torus");
      }
      const auto& box = u.eps_box();
      const auto& c = x.coords();
      auto inside = [&](std::size_t i) {
        if (i >= c.size()) throw Error(ErrorCode::ShapeMismatch, "eps-box coordinate out of range");
        Rational d = m.kind() == Magma::Kind::Torus ? dist_to_integer(c[i]) : abs(c[i]);
        return d <= box.eps;
      };
      if (box.coords.empty()) {
        for (std::size_t i = 0; i < c.size(); ++i)
          if (!inside(i)) return false;
        return true;
      }
      return std::all_of(box.coords.begin(), box.coords.end(), inside);
    }
    case Neighborhood::Kind::Subset: {
      const auto& mem = u.subset().members;
      return std::find(mem.begin(), mem.end(), x) != mem.end();
    }
    case Neighborhood::Kind::HMSubbasic:
      if (m.kind() != Magma::Kind::HM0) {
        throw Error(ErrorCode::ShapeMismatch, "subbasic HM neighbourhood needs an HM0 descriptor");
      }
      return hm_nbhd_member(*m.hm0().base, x.step(), u.hm_subbasic());
    case Neighborhood::Kind::Intersection: {
      const auto& parts = u.intersection().parts;
      return std::all_of(parts.begin(), parts.end(),
                         [&](const Neighborhood& p) { return nbhd_member(m, p, x); });
    }
    case Neighborhood::Kind::ProductDiscrete:
      return discrete_unit(m, x) && nbhd_member(left_factor(m), *u.product_discrete().base, x.left());
    case Neighborhood::Kind::Whole: return true;
  }
  return false;
}

Neighborhood nbhd_intersect(const Neighborhood& u1, const Neighborhood& u2) {
  using K = Neighborhood::Kind;
  if (u1.kind() == K::Whole) return u2;
  if (u2.kind() == K::Whole) return u1;
  if (u1.kind() == K::EpsBox && u2.kind() == K::EpsBox &&
      u1.eps_box().coords == u2.eps_box().coords) {
    const auto& a = u1.eps_box();
    const auto& b = u2.eps_box();
    return Neighborhood::eps_box(a.eps < b.eps ? a.eps : b.eps, a.coords);
  }
  if (u1.kind() == K::Subset && u2.kind() == K::Subset) {
    std::vector<Element> out;
    for (const auto& e : u1.subset().members) {
      const auto& other = u2.subset().members;
      if (std::find(other.begin(), other.end(), e) != other.end()) out.push_back(e);
    }
    return Neighborhood::subset(std::move(out));
  }
  if (u1.kind() == K::ProductDiscrete && u2.kind() == K::ProductDiscrete) {
    return Neighborhood::product_discrete(
        nbhd_intersect(*u1.product_discrete().base, *u2.product_discrete().base));
  }
  std::vector<Neighborhood> parts;
  for (const Neighborhood* u : {&u1, &u2}) {
    if (u->kind() == K::Intersection) {
      const auto& p = u->intersection().parts;
      parts.insert(parts.end(), p.begin(), p.end());
    } else {
      parts.push_back(*u);
    }
  }
  return Neighborhood::intersection(std::move(parts));
}

// --- automorphisms ----------------------------------------------------------

Automorphism Automorphism::finite_permutation(const Magma& m, std::map<std::string, std::string> map) {
  const auto& f = m.finite();
  std::set<std::string> image;
  for (const auto& name : f.elements) {
    auto it = map.find(name);
    if (it == map.end() || !f.find(it->second)) {
      throw Error(ErrorCode::NotAHomomorphism, "permutation is not total on the magma");
    }
    image.insert(it->second);
  }
  if (map.size() != f.elements.size() || image.size() != f.elements.size()) {
    throw Error(ErrorCode::NotAHomomorphism, "map is not a bijection");
  }
  const auto& u = f.elements[f.unit];
  if (map.at(u) != u) throw Error(ErrorCode::NotAHomomorphism, "automorphism must fix the unit");
  for (std::size_t i = 0; i < f.elements.size(); ++i) {
    for (std::size_t j = 0; j < f.elements.size(); ++j) {
      const auto& xy = f.elements[f.table[i][j]];
      std::size_t hi = *f.find(map.at(f.elements[i]));
      std::size_t hj = *f.find(map.at(f.elements[j]));
      if (map.at(xy) != f.elements[f.table[hi][hj]]) {
        throw Error(ErrorCode::NotAHomomorphism, "map does not preserve the operation");
      }
    }
  }
  return Automorphism(FinitePermutation{std::move(map)});
}

Automorphism Automorphism::matrix(UnimodularMatrix a) { return Automorphism(Matrix{std::move(a)}); }

Automorphism Automorphism::squeeze_power(std::int64_t k, SqueezeMap s) {
  return Automorphism(SqueezePower{k, std::move(s)});
}

Automorphism Automorphism::composite(std::vector<Automorphism> parts) {
  return Automorphism(Composite{std::move(parts)});
}

Element aut_act(const Automorphism& alpha, const Element& x, Automorphism::Direction direction) {
  const bool forward = direction == Automorphism::Direction::Forward;
  switch (alpha.kind()) {
    case Automorphism::Kind::FinitePermutation: {
      const auto& map = alpha.finite().map;
      const auto& name = x.atom_name();
      if (forward) {
        auto it = map.find(name);
        if (it == map.end()) throw Error(ErrorCode::ShapeMismatch, "symbol outside permutation domain");
        return Element::atom(it->second);
      }
      for (const auto& [from, to] : map) {
        if (to == name) return Element::atom(from);
      }
      throw Error(ErrorCode::ShapeMismatch, "symbol outside permutation range");
    }
    case Automorphism::Kind::Matrix: {
      const auto& a = alpha.as_matrix().matrix;
      if (x.kind() == Element::Kind::Torus) {
        return Element::torus(forward ? a.act(x.coords(), true) : a.inverse().act(x.coords(), true));
      }
      if (x.kind() == Element::Kind::Vector) {
        return Element::vector(forward ? a.act(x.coords(), false) : a.inverse().act(x.coords(), false));
      }
      throw Error(ErrorCode::ShapeMismatch, "matrix automorphism acts on vectors and torus points");
    }
    case Automorphism::Kind::SqueezePower: {
      const auto& sp = alpha.squeeze_power();
      return Element::step(alpha_apply(x.step(), forward ? sp.k : -sp.k, sp.squeeze));
    }
    case Automorphism::Kind::Composite: {
      const auto& parts = alpha.composite().parts;
      Element y = x;
      if (forward) {
        for (auto it = parts.rbegin(); it != parts.rend(); ++it) y = aut_act(*it, y, direction);
      } else {
        for (const auto& p : parts) y = aut_act(p, y, direction);
      }
      return y;
    }
  }
  throw Error(ErrorCode::ShapeMismatch, "unknown automorphism");
}

}  // namespace duomagma
