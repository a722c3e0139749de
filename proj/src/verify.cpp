#include "duomagma/verify.hpp"

#include "duomagma/error.hpp"
#include "duomagma/unimodular.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace duomagma {

// --- modes ----------------------------------------------------------------------

std::string to_string(Shape s) {
  switch (s) {
    case Shape::Left: return "left";
    case Shape::Right: return "right";
    case Shape::Duo: return "duo";
    case Shape::Roelcke: return "roelcke";
    case Shape::Preseparable: return "preseparable";
  }
  return "?";
}

std::string to_string(Cardinality c) {
  switch (c) {
    case Cardinality::Separable: return "separable";
    case Cardinality::Precompact: return "precompact";
    case Cardinality::Narrow: return "narrow";
  }
  return "?";
}

Shape parse_shape(const std::string& s) {
  for (Shape v : {Shape::Left, Shape::Right, Shape::Duo, Shape::Roelcke, Shape::Preseparable})
    if (to_string(v) == s) return v;
  throw Error(ErrorCode::SchemaError, "unknown shape '" + s + "'");
}

Cardinality parse_cardinality(const std::string& s) {
  for (Cardinality v : {Cardinality::Separable, Cardinality::Precompact, Cardinality::Narrow})
    if (to_string(v) == s) return v;
  throw Error(ErrorCode::SchemaError, "unknown cardinality '" + s + "'");
}

std::vector<Slot> expected_slots(Shape shape) {
  switch (shape) {
    case Shape::Left: return {Slot::S, Slot::U};
    case Shape::Right: return {Slot::U, Slot::S};
    case Shape::Duo: return {Slot::S, Slot::U, Slot::S};
    case Shape::Roelcke: return {Slot::U, Slot::S, Slot::U};
    case Shape::Preseparable: return {Slot::S, Slot::U, Slot::F, Slot::F, Slot::U, Slot::S};
  }
  return {};
}

// --- checking -------------------------------------------------------------------

namespace {

bool has_canonical_set(const Magma& m) {
  return m.kind() == Magma::Kind::SemidirectZ || m.kind() == Magma::Kind::SemidirectAut ||
         m.kind() == Magma::Kind::Finite;
}

bool canonical_set_finite(const Magma& m) { return m.kind() == Magma::Kind::Finite; }

Verdict fail(std::string clause, std::string detail) { return {false, std::move(clause), std::move(detail)}; }

}  // namespace

Verdict check_certificate(const WitnessCertificate& c) {
  if (!c.magma) throw Error(ErrorCode::MalformedCertificate, "missing magma");
  const Magma& m = *c.magma;
  const auto slots = expected_slots(c.mode.shape);
  if (c.slots != slots || c.witness.size() != slots.size()) {
    throw Error(ErrorCode::MalformedCertificate, "witness tuple does not fit the " + to_string(c.mode.shape) + " shape");
  }
  if (!belongs(m, c.element)) throw Error(ErrorCode::MalformedCertificate, "element does not belong to the magma");
  if (c.s_set) {
    for (const auto& s : *c.s_set)
      if (!belongs(m, s)) throw Error(ErrorCode::MalformedCertificate, "s_set member outside the magma");
  } else if (!has_canonical_set(m)) {
    throw Error(ErrorCode::MalformedCertificate, "descriptor has no canonical countable set; supply s_set");
  } else if (c.mode.cardinality == Cardinality::Precompact && !canonical_set_finite(m)) {
    throw Error(ErrorCode::MalformedCertificate, "precompact mode needs a finite s_set");
  }
  const bool uses_f = std::find(slots.begin(), slots.end(), Slot::F) != slots.end();
  if (uses_f && !c.f_set) throw Error(ErrorCode::MalformedCertificate, "F-slots need an f_set");
  if (c.f_set) {
    for (const auto& f : *c.f_set)
      if (!belongs(m, f)) throw Error(ErrorCode::MalformedCertificate, "f_set member outside the magma");
  }

  bool unit_inside = false;
  try {
    unit_inside = nbhd_member(m, c.neighborhood, unit_of(m));
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedCertificate, std::string("neighbourhood does not fit the magma: ") + e.what());
  }
  if (!unit_inside) return fail("unit-neighborhood", "the unit is not in the neighbourhood");

  auto in_s = [&](const Element& s) {
    if (c.s_set) return std::find(c.s_set->begin(), c.s_set->end(), s) != c.s_set->end();
    if (m.kind() == Magma::Kind::Finite) return belongs(m, s);
    return in_canonical_countable_set(m, s);
  };
  const std::vector<Slot> order = {Slot::S, Slot::U, Slot::F};
  for (Slot kind : order) {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i] != kind) continue;
      const Element& w = c.witness[i];
      const std::string where = "slot " + std::to_string(i);
      if (kind == Slot::S && !in_s(w)) return fail("s-membership", where);
      if (kind == Slot::U && !(belongs(m, w) && nbhd_member(m, c.neighborhood, w))) {
        return fail("u-membership", where);
      }
      if (kind == Slot::F && std::find(c.f_set->begin(), c.f_set->end(), w) == c.f_set->end()) {
        return fail("f-membership", where);
      }
    }
  }

  auto mul = [&](const Element& x, const Element& y) { return op_apply(m, x, y); };
  const auto& w = c.witness;
  const bool left_first = c.association == Association::Left;
  switch (c.mode.shape) {
    case Shape::Left:
    case Shape::Right:
      if (mul(w[0], w[1]) != c.element) return fail("product-mismatch", "w0 * w1");
      break;
    case Shape::Duo:
    case Shape::Roelcke: {
      Element left = mul(mul(w[0], w[1]), w[2]);
      Element right = mul(w[0], mul(w[1], w[2]));
      const Element& first = left_first ? left : right;
      const Element& second = left_first ? right : left;
      if (first != c.element) return fail("product-mismatch", left_first ? "(w0 w1) w2" : "w0 (w1 w2)");
      if (second != c.element) {
        return fail("second-association-mismatch", left_first ? "w0 (w1 w2)" : "(w0 w1) w2");
      }
      break;
    }
    case Shape::Preseparable: {
      Element su_f = mul(mul(w[0], w[1]), w[2]);
      Element s_uf = mul(w[0], mul(w[1], w[2]));
      if ((left_first ? su_f : s_uf) != c.element) return fail("product-mismatch", left_first ? "(su)f" : "s(uf)");
      if ((left_first ? s_uf : su_f) != c.element) {
        return fail("second-association-mismatch", left_first ? "s(uf)" : "(su)f");
      }
      if (mul(w[3], mul(w[4], w[5])) != c.element) return fail("f-left-mismatch", "f(us)");
      if (mul(mul(w[3], w[4]), w[5]) != c.element) return fail("f-left-second-association-mismatch", "(fu)s");
      break;
    }
  }
  return {};
}

WitnessCertificate certificate_from_witness(MagmaPtr magma, const Element& element, const Neighborhood& u,
                                            const DuoWitness& w) {
  WitnessCertificate c{CoverageMode{Shape::Duo, Cardinality::Separable}, std::move(magma), element, u,
                       {w.s1, w.u, w.s2}, expected_slots(Shape::Duo), w.association, std::nullopt, std::nullopt};
  return c;
}

// --- oracles ---------------------------------------------------------------------

namespace {

std::int64_t to_i64(const Integer& z) {
  if (!z.fits_slong_p() || ::abs(z) > Integer(1) << 40) {
    throw Error(ErrorCode::InstanceTooLarge, "scaled entry too large for the oracle");
  }
  return z.get_si();
}

}  // namespace

std::optional<std::vector<Integer>> oracle_small_combination(const std::vector<std::vector<Rational>>& columns,
                                                             const Rational& eps) {
  const std::size_t l = columns.size();
  if (l == 0) throw Error(ErrorCode::ShapeMismatch, "no columns");
  const std::size_t n = columns[0].size();
  if (l > 3 || n > 2) throw Error(ErrorCode::InstanceTooLarge, "oracle handles l <= 3, n <= 2");
  if (eps < 0) throw Error(ErrorCode::SchemaError, "eps must be nonnegative");

  std::vector<Rational> all = {eps};
  for (const auto& col : columns) {
    if (col.size() != n) throw Error(ErrorCode::ShapeMismatch, "columns differ in length");
    all.insert(all.end(), col.begin(), col.end());
  }
  const Integer scale = lcm_of_denominators(all);
  std::vector<std::vector<std::int64_t>> y(l, std::vector<std::int64_t>(n));
  std::int64_t largest = 0;
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t r = 0; r < n; ++r) {
      y[i][r] = to_i64(Rational(columns[i][r] * scale).get_num());
      largest = std::max<std::int64_t>(largest, y[i][r] < 0 ? -y[i][r] : y[i][r]);
    }
  }
  const std::int64_t e = to_i64(Rational(eps * scale).get_num());

  std::int64_t k = 10;
  if (e > 0) {
    std::int64_t mm = std::max<std::int64_t>(1, (largest + e - 1) / e);
    std::int64_t base = 2 * static_cast<std::int64_t>(l) * mm;
    std::int64_t p = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (p > 100 / base + 1) throw Error(ErrorCode::InstanceTooLarge, "pigeonhole bound exceeds 100");
      p *= base;
    }
    k = p + 1;
  }
  if (k > 100) throw Error(ErrorCode::InstanceTooLarge, "pigeonhole bound exceeds 100");

  const std::int64_t radius = 2 * k;
  std::vector<std::int64_t> d(l, -radius);
  std::optional<std::vector<std::int64_t>> best;
  std::int64_t best_norm = 0;
  while (true) {
    std::int64_t g = 0, norm = 0, first = 0;
    for (auto v : d) {
      g = std::gcd(g, v);
      norm = std::max<std::int64_t>(norm, v < 0 ? -v : v);
      if (first == 0) first = v;
    }
    if (g == 1 && first > 0 && (!best || norm < best_norm || (norm == best_norm && d < *best))) {
      bool ok = true;
      for (std::size_t r = 0; r < n && ok; ++r) {
        __int128 s = 0;
        for (std::size_t i = 0; i < l; ++i) s += static_cast<__int128>(d[i]) * y[i][r];
        ok = (s < 0 ? -s : s) <= e;
      }
      if (ok) {
        best = d;
        best_norm = norm;
      }
    }
    std::size_t i = l;
    while (i > 0 && d[i - 1] == radius) d[--i] = -radius;
    if (i == 0) break;
    ++d[i - 1];
  }
  if (!best) return std::nullopt;
  return std::vector<Integer>(best->begin(), best->end());
}

std::optional<UnimodularMatrix> oracle_shrink_1x2(const Rational& a, const Rational& b, const Rational& eps,
                                                  int radius) {
  const Integer scale = lcm_of_denominators({a, b, eps});
  const std::int64_t ia = to_i64(Rational(a * scale).get_num());
  const std::int64_t ib = to_i64(Rational(b * scale).get_num());
  const std::int64_t ie = to_i64(Rational(eps * scale).get_num());
  for (std::int64_t r = 0; r <= radius; ++r) {
    for (std::int64_t p = -r; p <= r; ++p) {
      for (std::int64_t q = -r; q <= r; ++q) {
        if (std::max(p < 0 ? -p : p, q < 0 ? -q : q) != r || std::gcd(p, q) != 1) continue;
        __int128 v = static_cast<__int128>(ia) * p + static_cast<__int128>(ib) * q;
        if ((v < 0 ? -v : v) > ie) continue;
        // first column (p, q); look for (u, w) with p*w - u*q = 1
        for (std::int64_t u = -radius; u <= radius; ++u) {
          for (std::int64_t w = -radius; w <= radius; ++w) {
            if (p * w - u * q != 1) continue;
            return UnimodularMatrix(IntMatrix{{Integer(p), Integer(u)}, {Integer(q), Integer(w)}});
          }
        }
      }
    }
  }
  return std::nullopt;
}

bool oracle_step_membership(const Magma& base, const StepFunction& f, const Neighborhood::HMSubbasic& n) {
  std::vector<Rational> cuts = {n.a, n.b};
  for (const auto& p : f.pieces())
    if (p.start > n.a && p.start < n.b) cuts.push_back(p.start);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Rational bad = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Rational mid = (cuts[i] + cuts[i + 1]) / 2;
    if (!nbhd_member(base, *n.inner, f.value_at(mid))) bad += cuts[i + 1] - cuts[i];
  }
  return bad < n.eps;
}

// --- generators --------------------------------------------------------------------

Rational Rng::rational(std::int64_t max_den, std::int64_t lo, std::int64_t hi) {
  std::int64_t den = between(1, max_den);
  Rational r(Integer(between(lo * den, hi * den)), Integer(den));
  r.canonicalize();
  return r;
}

StepFunction random_step_function(Rng& rng, const Magma& base, std::size_t max_pieces, std::int64_t max_den) {
  if (base.kind() != Magma::Kind::Finite) throw Error(ErrorCode::ShapeMismatch, "random steps need a finite base");
  const auto& fin = base.finite();
  const std::size_t pieces = 1 + rng.below(max_pieces);
  std::set<Rational> starts = {Rational(0)};
  for (std::size_t tries = 0; starts.size() < pieces && tries < 4 * max_pieces; ++tries) {
    std::int64_t den = rng.between(2, max_den);
    Rational t(Integer(rng.between(1, den - 1)), Integer(den));
    t.canonicalize();
    starts.insert(t);
  }
  std::vector<StepFunction::Piece> raw;
  for (const auto& s : starts) {
    Element v = raw.empty() ? unit_of(base) : Element::atom(fin.elements[rng.below(fin.elements.size())]);
    raw.push_back({s, v});
  }
  return StepFunction::canonicalize(std::move(raw));
}

Neighborhood random_hm_neighborhood(Rng& rng, const Magma& base) {
  static const Rational epsilons[] = {Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 16), Rational(1, 32)};
  Rational eps = epsilons[rng.below(5)];
  Neighborhood inner = rng.below(2) ? Neighborhood::whole() : Neighborhood::subset({unit_of(base)});
  Rational a = 0, b = 1;
  if (rng.below(2)) {
    Rational x(Integer(rng.between(0, 7)), Integer(8));
    Rational y(Integer(rng.between(1, 8)), Integer(8));
    if (x > y) std::swap(x, y);
    if (x == y) y = x + Rational(1, 8);
    if (y > 1) {
      y = 1;
      x = Rational(7, 8);
    }
    a = x;
    b = y;
  }
  return Neighborhood::hm_subbasic(std::move(inner), a, b, eps);
}

std::vector<std::vector<Rational>> random_torus_points(Rng& rng, std::size_t dim, std::size_t count,
                                                       std::int64_t max_den) {
  std::vector<std::vector<Rational>> out(count, std::vector<Rational>(dim));
  for (auto& p : out) {
    for (auto& c : p) {
      std::int64_t den = rng.between(1, max_den);
      c = Rational(Integer(rng.between(0, den - 1)), Integer(den));
      c.canonicalize();
    }
  }
  return out;
}

RationalMatrix random_rational_matrix(Rng& rng, std::size_t rows, std::size_t cols, std::int64_t max_den,
                                      std::int64_t max_abs) {
  RationalMatrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = rng.rational(max_den, -max_abs, max_abs);
  return out;
}

InstanceKind parse_instance_kind(const std::string& s) {
  if (s == "step-function") return InstanceKind::StepFunction;
  if (s == "torus-point-set") return InstanceKind::TorusPointSet;
  if (s == "shrink-matrix") return InstanceKind::ShrinkMatrix;
  if (s == "certificate") return InstanceKind::Certificate;
  throw Error(ErrorCode::UnknownKind, "unknown instance kind '" + s + "'");
}

Instance random_instance(InstanceKind kind, std::uint64_t seed) {
  Rng rng(seed);
  switch (kind) {
    case InstanceKind::StepFunction: {
      MagmaPtr c3 = cyclic_group(3);
      return random_step_function(rng, *c3, 6, 12);
    }
    case InstanceKind::TorusPointSet: {
      std::size_t dim = rng.below(2) ? 4 : 2;
      std::size_t count = 1 + rng.below(2);
      return random_torus_points(rng, dim, count, 12);
    }
    case InstanceKind::ShrinkMatrix: return random_rational_matrix(rng, 2, 4, 8, 2);
    case InstanceKind::Certificate: {
      MagmaPtr base = cyclic_group(2 + rng.below(2));
      MagmaPtr f = build_F(base);
      Element x = Element::pair(Element::step(random_step_function(rng, *base, 6, 12)), rng.between(-10, 10));
      Neighborhood u = Neighborhood::product_discrete(random_hm_neighborhood(rng, *base));
      WitnessCertificate c = certificate_from_witness(f, x, u, duo_witness_z(*f, x, u));
      if (seed % 2 == 1) {
        static const Tamper kinds[] = {Tamper::Element, Tamper::S1, Tamper::U, Tamper::S2};
        if (auto t = tamper(c, kinds[rng.below(4)])) return *t;
      }
      return c;
    }
  }
  throw Error(ErrorCode::UnknownKind, "unknown instance kind");
}

// --- tampering ------------------------------------------------------------------------

std::string to_string(Tamper t) {
  switch (t) {
    case Tamper::Element: return "element";
    case Tamper::S1: return "s1";
    case Tamper::U: return "u";
    case Tamper::S2: return "s2";
    case Tamper::Neighborhood: return "neighborhood";
  }
  return "?";
}

namespace {

UnimodularMatrix shear(std::size_t d) {
  IntMatrix e = IntMatrix::identity(d);
  e(0, 1) = 1;
  return UnimodularMatrix(std::move(e));
}

/// Same left factor, right factor moved off its current value.
Element bump(const Element& p) {
  if (std::holds_alternative<std::int64_t>(p.right())) return Element::pair(p.left(), p.exponent() + 1);
  const auto& a = p.automorphism();
  return Element::pair(p.left(), a * shear(a.size()));
}

}  // namespace

Rational witness_defect(const WitnessCertificate& c) {
  const Magma& m = *c.magma;
  if (c.neighborhood.kind() != Neighborhood::Kind::ProductDiscrete || c.witness.size() != 3) {
    throw Error(ErrorCode::ShapeMismatch, "defect needs a duo certificate over a product neighbourhood");
  }
  const Neighborhood& inner = *c.neighborhood.product_discrete().base;
  const Element& u = c.witness[1].left();
  if (m.kind() == Magma::Kind::SemidirectZ) {
    const Magma& base = *m.semidirect_z().base->hm0().base;
    NormalizedUnitNbhd n = hm_nbhd_normalize(base, subbasic_parts(inner));
    if (n.whole) return 0;
    return hm_measure_defect(base, u.step(), n.inner, 0, 1);
  }
  if (m.kind() == Magma::Kind::SemidirectAut) {
    if (inner.kind() != Neighborhood::Kind::EpsBox) return 0;
    std::vector<std::size_t> coords = inner.eps_box().coords;
    if (coords.empty()) {
      coords.resize(u.coords().size());
      std::iota(coords.begin(), coords.end(), std::size_t{0});
    }
    Rational worst = 0;
    for (std::size_t i : coords) worst = std::max(worst, dist_to_integer(u.coords()[i]));
    return worst;
  }
  throw Error(ErrorCode::ShapeMismatch, "defect needs a built semidirect product");
}

std::optional<WitnessCertificate> tamper(const WitnessCertificate& c, Tamper t) {
  WitnessCertificate out = c;
  switch (t) {
    case Tamper::Element: out.element = bump(c.element); break;
    case Tamper::S1: out.witness[0] = bump(c.witness[0]); break;
    case Tamper::U: out.witness[1] = bump(c.witness[1]); break;
    case Tamper::S2: out.witness[2] = bump(c.witness[2]); break;
    case Tamper::Neighborhood: {
      Rational d = witness_defect(c);
      if (d <= 0) return std::nullopt;
      const Magma& m = *c.magma;
      if (m.kind() == Magma::Kind::SemidirectZ) {
        const Magma& base = *m.semidirect_z().base->hm0().base;
        NormalizedUnitNbhd n = hm_nbhd_normalize(base, subbasic_parts(*c.neighborhood.product_discrete().base));
        out.neighborhood = Neighborhood::product_discrete(Neighborhood::hm_subbasic(n.inner, 0, 1, d));
      } else {
        const auto& box = c.neighborhood.product_discrete().base->eps_box();
        out.neighborhood = Neighborhood::product_discrete(Neighborhood::eps_box(d / 2, box.coords));
      }
      break;
    }
  }
  return out;
}

}  // namespace duomagma
