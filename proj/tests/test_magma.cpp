#include "duomagma/error.hpp"
#include "duomagma/hm.hpp"
#include "duomagma/magma.hpp"
#include "duomagma/verify.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace duomagma;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }
Element atom(const char* s) { return Element::atom(s); }
Element tor(std::vector<Rational> v) { return Element::torus(std::move(v)); }

MagmaPtr c2() { return cyclic_group(2, {"1", "x"}); }

MagmaPtr twisted_three() {
  return mk_finite_magma({"1", "a", "b"}, {{"1", "a", "b"}, {"a", "b", "a"}, {"b", "b", "a"}}, "1");
}

void expect_code(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(FiniteMagma, CyclicOfOrderTwoIsAssociative) {
  auto m = mk_finite_magma({"1", "x"}, {{"1", "x"}, {"x", "1"}}, "1");
  EXPECT_TRUE(is_associative(*m));
  EXPECT_TRUE(is_group(*m));
  EXPECT_EQ(op_apply(*m, atom("x"), atom("x")), atom("1"));
}

TEST(FiniteMagma, RejectsBrokenUnitRow) {
  expect_code(ErrorCode::UnitLawViolation,
              [] { mk_finite_magma({"1", "x"}, {{"x", "1"}, {"1", "x"}}, "1"); });
}

TEST(FiniteMagma, RejectsUnknownSymbol) {
  expect_code(ErrorCode::UnknownSymbol, [] { mk_finite_magma({"1", "x"}, {{"1", "x"}, {"x", "y"}}, "1"); });
  expect_code(ErrorCode::UnknownSymbol, [] { mk_finite_magma({"1", "x"}, {{"1", "x"}, {"x", "1"}}, "z"); });
}

TEST(FiniteMagma, RejectsWrongTableShape) {
  expect_code(ErrorCode::ShapeMismatch, [] { mk_finite_magma({"1", "x"}, {{"1", "x"}}, "1"); });
}

TEST(FiniteMagma, AssociativityFlagMatchesExhaustiveScan) {
  // a.b = a, b.a = b on {a,b} with an adjoined unit is a left-zero band
  auto band = mk_finite_magma({"1", "a", "b"}, {{"1", "a", "b"}, {"a", "a", "a"}, {"b", "b", "b"}}, "1");
  EXPECT_EQ(is_associative(*band), oracle::associative_by_scan(*band));
  auto twisted = twisted_three();
  EXPECT_FALSE(is_associative(*twisted));
  EXPECT_EQ(is_associative(*twisted), oracle::associative_by_scan(*twisted));
  for (std::size_t n = 1; n <= 8; ++n) {
    auto c = cyclic_group(n);
    EXPECT_TRUE(is_associative(*c));
    EXPECT_TRUE(oracle::associative_by_scan(*c));
  }
}

TEST(FiniteMagma, UnitLawsExhaustive) {
  for (auto m : {c2(), cyclic_group(5), twisted_three()}) {
    Element e = unit_of(*m);
    for (const auto& s : m->finite().elements) {
      EXPECT_EQ(op_apply(*m, e, atom(s.c_str())), atom(s.c_str()));
      EXPECT_EQ(op_apply(*m, atom(s.c_str()), e), atom(s.c_str()));
    }
  }
}

TEST(OpApply, Examples) {
  auto t2 = rational_torus(2);
  EXPECT_EQ(op_apply(*t2, tor({q(2, 5), q(1, 3)}), tor({q(4, 5), q(0)})), tor({q(1, 5), q(1, 3)}));
  auto v1 = rational_vector_group(1);
  EXPECT_EQ(op_apply(*v1, Element::vector({q(5, 2)}), Element::vector({q(-2)})), Element::vector({q(1, 2)}));
}

TEST(OpApply, ShapeMismatch) {
  auto t2 = rational_torus(2);
  expect_code(ErrorCode::ShapeMismatch, [&] { op_apply(*t2, tor({q(1, 2)}), tor({q(0), q(0)})); });
  expect_code(ErrorCode::ShapeMismatch, [&] { op_apply(*c2(), atom("x"), atom("y")); });
  expect_code(ErrorCode::ShapeMismatch, [&] { op_apply(*t2, Element::vector({q(0), q(0)}), tor({q(0), q(0)})); });
}

TEST(OpApply, TorusOutputsStayInUnitInterval) {
  auto t3 = rational_torus(3);
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    std::vector<Rational> a(3), b(3);
    for (auto& v : a) v = rng.rational(12, -3, 3);
    for (auto& v : b) v = rng.rational(12, -3, 3);
    Element s = op_apply(*t3, tor(a), tor(b));
    for (const auto& c : s.coords()) {
      EXPECT_GE(c, 0);
      EXPECT_LT(c, 1);
    }
  }
}

TEST(OpApply, VectorAndTorusAssociativeOnRandomTriples) {
  Rng rng(5);
  auto v2 = rational_vector_group(2);
  auto t2 = rational_torus(2);
  for (int i = 0; i < 100; ++i) {
    std::vector<Element> vs, ts;
    for (int k = 0; k < 3; ++k) {
      std::vector<Rational> c = {rng.rational(9, -2, 2), rng.rational(9, -2, 2)};
      vs.push_back(Element::vector(c));
      ts.push_back(tor(c));
    }
    EXPECT_EQ(op_apply(*v2, op_apply(*v2, vs[0], vs[1]), vs[2]), op_apply(*v2, vs[0], op_apply(*v2, vs[1], vs[2])));
    EXPECT_EQ(op_apply(*t2, op_apply(*t2, ts[0], ts[1]), ts[2]), op_apply(*t2, ts[0], op_apply(*t2, ts[1], ts[2])));
  }
}

TEST(Neighborhoods, MembershipExamples) {
  auto t2 = rational_torus(2);
  auto box = Neighborhood::eps_box(q(1, 10));
  EXPECT_TRUE(nbhd_member(*t2, box, tor({q(0), q(1, 15)})));
  EXPECT_FALSE(nbhd_member(*t2, box, tor({q(1, 2), q(0)})));
  EXPECT_TRUE(nbhd_member(*t2, box, tor({q(19, 20), q(0)})));  // distance to 1 is 1/20
  EXPECT_TRUE(nbhd_member(*t2, Neighborhood::eps_box(q(1, 10), {1}), tor({q(1, 2), q(0)})));
  auto v1 = rational_vector_group(1);
  EXPECT_FALSE(nbhd_member(*v1, box, Element::vector({q(19, 20)})));
}

TEST(Neighborhoods, UnitBelongsToEveryUnitNeighborhood) {
  auto t2 = rational_torus(2);
  EXPECT_TRUE(nbhd_member(*t2, Neighborhood::eps_box(q(1, 1000)), unit_of(*t2)));
  auto m = c2();
  EXPECT_TRUE(nbhd_member(*m, Neighborhood::subset({atom("1")}), unit_of(*m)));
  auto hm = hm0_of(m);
  auto n = Neighborhood::hm_subbasic(Neighborhood::subset({atom("1")}), q(1, 3), q(1, 2), q(1, 100));
  EXPECT_TRUE(nbhd_member(*hm, n, unit_of(*hm)));
  auto f = build_F(m);
  EXPECT_TRUE(nbhd_member(*f, Neighborhood::product_discrete(n), unit_of(*f)));
}

TEST(Neighborhoods, ProductDiscreteNeedsDiscreteUnit) {
  auto f = build_F(c2());
  auto u = Neighborhood::product_discrete(Neighborhood::whole());
  EXPECT_TRUE(nbhd_member(*f, u, Element::pair(unit_of(*f->semidirect_z().base), std::int64_t{0})));
  EXPECT_FALSE(nbhd_member(*f, u, Element::pair(unit_of(*f->semidirect_z().base), std::int64_t{1})));
}

TEST(Neighborhoods, ShapeMismatch) {
  expect_code(ErrorCode::ShapeMismatch, [] { nbhd_member(*c2(), Neighborhood::eps_box(q(1, 2)), atom("x")); });
  expect_code(ErrorCode::ShapeMismatch,
              [] { nbhd_member(*rational_torus(1), Neighborhood::eps_box(q(1, 2), {3}), tor({q(0)})); });
}

TEST(Neighborhoods, IntersectFusesBoxesAndSubsets) {
  EXPECT_EQ(nbhd_intersect(Neighborhood::eps_box(q(1, 10)), Neighborhood::eps_box(q(1, 4))),
            Neighborhood::eps_box(q(1, 10)));
  EXPECT_EQ(nbhd_intersect(Neighborhood::subset({atom("1"), atom("x")}), Neighborhood::subset({atom("1")})),
            Neighborhood::subset({atom("1")}));
}

TEST(Neighborhoods, IntersectionIsConjunction) {
  auto base = cyclic_group(3);
  auto hm = hm0_of(base);
  Rng rng(77);
  for (int i = 0; i < 40; ++i) {
    auto n1 = random_hm_neighborhood(rng, *base);
    auto n2 = random_hm_neighborhood(rng, *base);
    auto both = nbhd_intersect(n1, n2);
    EXPECT_EQ(both.kind(), Neighborhood::Kind::Intersection);
    for (int k = 0; k < 20; ++k) {
      Element f = Element::step(random_step_function(rng, *base, 6, 12));
      EXPECT_EQ(nbhd_member(*hm, both, f), nbhd_member(*hm, n1, f) && nbhd_member(*hm, n2, f));
    }
  }
}

TEST(Automorphisms, MatrixExample) {
  auto a = Automorphism::matrix(UnimodularMatrix(IntMatrix{{5, 1}, {-6, -1}}));
  EXPECT_EQ(aut_act(a, tor({q(2, 5), q(1, 3)})), tor({q(0), q(1, 15)}));
  EXPECT_EQ(aut_act(a, tor({q(0), q(1, 15)}), Automorphism::Direction::Inverse), tor({q(2, 5), q(1, 3)}));
}

TEST(Automorphisms, FixUnitAndInvert) {
  auto t2 = rational_torus(2);
  auto c3 = cyclic_group(3);
  auto hm = hm0_of(c3);
  auto mat = Automorphism::matrix(UnimodularMatrix(IntMatrix{{2, 1}, {1, 1}}));
  auto swap = Automorphism::finite_permutation(*c3, {{"0", "0"}, {"1", "2"}, {"2", "1"}});
  auto sq = Automorphism::squeeze_power(3);
  auto comp = Automorphism::composite({mat, Automorphism::matrix(UnimodularMatrix(IntMatrix{{1, 3}, {0, 1}}))});
  EXPECT_EQ(aut_act(mat, unit_of(*t2)), unit_of(*t2));
  EXPECT_EQ(aut_act(comp, unit_of(*t2)), unit_of(*t2));
  EXPECT_EQ(aut_act(swap, unit_of(*c3)), unit_of(*c3));
  EXPECT_EQ(aut_act(sq, unit_of(*hm)), unit_of(*hm));

  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    auto p = random_torus_points(rng, 2, 1, 12)[0];
    Element x = tor(p);
    for (const auto* a : {&mat, &comp}) {
      EXPECT_EQ(aut_act(*a, aut_act(*a, x), Automorphism::Direction::Inverse), x);
      EXPECT_EQ(aut_act(*a, aut_act(*a, x, Automorphism::Direction::Inverse)), x);
    }
    Element f = Element::step(random_step_function(rng, *c3, 6, 12));
    EXPECT_EQ(aut_act(sq, aut_act(sq, f), Automorphism::Direction::Inverse), f);
  }
}

TEST(Automorphisms, PreserveTheOperation) {
  auto t2 = rational_torus(2);
  auto c3 = cyclic_group(3);
  auto hm = hm0_of(c3);
  auto mat = Automorphism::matrix(UnimodularMatrix(IntMatrix{{5, 1}, {-6, -1}}));
  auto comp = Automorphism::composite({mat, Automorphism::matrix(UnimodularMatrix(IntMatrix{{1, 0}, {4, 1}}))});
  auto swap = Automorphism::finite_permutation(*c3, {{"0", "0"}, {"1", "2"}, {"2", "1"}});
  Rng rng(19);
  for (int i = 0; i < 60; ++i) {
    auto pts = random_torus_points(rng, 2, 2, 12);
    Element x = tor(pts[0]), y = tor(pts[1]);
    for (const auto* a : {&mat, &comp}) {
      EXPECT_EQ(aut_act(*a, op_apply(*t2, x, y)), op_apply(*t2, aut_act(*a, x), aut_act(*a, y)));
    }
    for (std::int64_t k = -3; k <= 3; ++k) {
      auto sq = Automorphism::squeeze_power(k);
      Element f = Element::step(random_step_function(rng, *c3, 5, 10));
      Element g = Element::step(random_step_function(rng, *c3, 5, 10));
      EXPECT_EQ(aut_act(sq, op_apply(*hm, f, g)), op_apply(*hm, aut_act(sq, f), aut_act(sq, g)));
    }
  }
  for (const auto& a : c3->finite().elements)
    for (const auto& b : c3->finite().elements) {
      Element x = Element::atom(a), y = Element::atom(b);
      EXPECT_EQ(aut_act(swap, op_apply(*c3, x, y)), op_apply(*c3, aut_act(swap, x), aut_act(swap, y)));
    }
}

TEST(Automorphisms, PermutationMustFixUnitAndPreserveTable) {
  auto c3 = cyclic_group(3);
  expect_code(ErrorCode::NotAHomomorphism,
              [&] { Automorphism::finite_permutation(*c3, {{"0", "1"}, {"1", "0"}, {"2", "2"}}); });
  auto c4 = cyclic_group(4);
  // fixes 0 but 1+1 = 2 would have to map to 2+2 = 0
  expect_code(ErrorCode::NotAHomomorphism,
              [&] { Automorphism::finite_permutation(*c4, {{"0", "0"}, {"1", "2"}, {"2", "1"}, {"3", "3"}}); });
}

TEST(Unimodular, RejectsNonUnitDeterminant) {
  expect_code(ErrorCode::NonInvertibleMatrix, [] { UnimodularMatrix(IntMatrix{{2, 0}, {0, 1}}); });
  expect_code(ErrorCode::NonInvertibleMatrix, [] { UnimodularMatrix(IntMatrix{{0, 1}, {1, 0}}); });
}

TEST(Unimodular, DeterminantAgreesWithCofactorExpansion) {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 1 + rng.below(5);
    IntMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = rng.between(-9, 9);
    EXPECT_EQ(determinant(m), oracle::det_cofactor(m));
  }
}
