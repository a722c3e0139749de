#include "duomagma/error.hpp"
#include "duomagma/unimodular.hpp"
#include "duomagma/verify.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <thread>

using namespace duomagma;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

std::vector<Integer> ints(std::initializer_list<long> v) { return std::vector<Integer>(v.begin(), v.end()); }

void expect_completion(const std::vector<Integer>& d) {
  UnimodularMatrix m = primitive_completion(d);
  ASSERT_EQ(m.size(), d.size());
  for (std::size_t r = 0; r < d.size(); ++r) EXPECT_EQ(m(r, d.size() - 1), d[r]);
  if (d.size() <= 6) EXPECT_EQ(oracle::det_cofactor(m.matrix()), 1);
}

bool in_box(const std::vector<std::vector<Rational>>& pts, const UnimodularMatrix& a,
            const std::vector<std::size_t>& coords, const Rational& eps) {
  for (const auto& p : pts) {
    auto img = oracle::row_times(p, a.matrix(), true);
    for (std::size_t c = 0; c < img.size(); ++c) {
      if (!coords.empty() && std::find(coords.begin(), coords.end(), c) == coords.end()) continue;
      Rational d = img[c] < Rational(1, 2) ? img[c] : Rational(1 - img[c]);
      if (d > eps) return false;
    }
  }
  return true;
}

}  // namespace

TEST(ExtendedGcd, BezoutIdentity) {
  Rng rng(1);
  for (int i = 0; i < 300; ++i) {
    Integer a = rng.between(-1000, 1000), b = rng.between(-1000, 1000);
    auto [g, x, y] = extended_gcd(a, b);
    Integer expect;
    mpz_gcd(expect.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    EXPECT_EQ(g, expect);
    EXPECT_EQ(x * a + y * b, g);
  }
}

TEST(PrimitiveCompletion, Examples) {
  EXPECT_EQ(primitive_completion(ints({0, 1})), UnimodularMatrix::identity(2));
  EXPECT_EQ(primitive_completion(ints({2, 3})), UnimodularMatrix(IntMatrix{{1, 2}, {1, 3}}));
  expect_completion(ints({6, 10, 15}));
  expect_completion(ints({1}));
  expect_completion(ints({-1, 0}));
  expect_completion(ints({0, 0, -1}));
}

TEST(PrimitiveCompletion, RejectsNonPrimitive) {
  for (auto d : {ints({2, 4}), ints({0, 0}), ints({-1}), ints({3})}) {
    try {
      primitive_completion(d);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NotPrimitive);
    }
  }
}

TEST(PrimitiveCompletion, RandomVectors) {
  Rng rng(2);
  int done = 0;
  while (done < 300) {
    std::size_t l = 2 + rng.below(5);
    std::vector<Integer> d(l);
    for (auto& v : d) v = rng.between(-1000000, 1000000);
    if (gcd_of(d) != 1) continue;
    expect_completion(d);
    ++done;
  }
}

TEST(Lll, ReducesKnownBasis) {
  IntMatrix b{{1, 1, 1}, {-1, 0, 2}, {3, 5, 6}};
  IntMatrix r = lll_reduce(b);
  EXPECT_EQ(::abs(determinant(r)), ::abs(determinant(b)));
  EXPECT_EQ(r.row(0), ints({0, 1, 0}));
  EXPECT_EQ(r.row(1), ints({1, 0, 1}));
  EXPECT_EQ(r.row(2), ints({-2, 0, 1}));
}

TEST(SmallCombination, Examples) {
  auto d = small_combination({{q(3, 7)}, {q(2, 7)}}, q(1, 7), SearchBudget{SearchStrategy::Enumeration});
  EXPECT_EQ(d, ints({1, -1}));
  EXPECT_EQ(small_combination({{q(0)}}, q(0)), ints({1}));
  auto e = small_combination({{q(1, 2)}, {q(1, 3)}, {q(1, 6)}}, q(0));
  EXPECT_TRUE(combination_is_small({{q(1, 2)}, {q(1, 3)}, {q(1, 6)}}, e, q(0)));
  EXPECT_EQ(gcd_of(e), 1);
  for (auto strategy : {SearchStrategy::Enumeration, SearchStrategy::LatticeReduction}) {
    auto f = small_combination({{q(1, 2)}, {q(1, 2)}}, q(0), SearchBudget{strategy});
    EXPECT_TRUE(f == ints({1, -1}) || f == ints({-1, 1}));
  }
}

TEST(SmallCombination, BudgetExhausted) {
  SearchBudget tiny{SearchStrategy::Enumeration, 5};
  try {
    small_combination({{q(1, 3)}, {q(1, 5)}}, q(1, 1000), tiny);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExhausted);
  }
}

TEST(SmallCombination, StrategiesAgreeWithOracleOnPostCheck) {
  Rng rng(3);
  for (int i = 0; i < 120; ++i) {
    std::size_t l = 2 + rng.below(2);
    std::size_t n = 1;
    Rational eps = l == 2 ? Rational(1, 1 + static_cast<long>(rng.below(8))) : Rational(1, 2);
    std::vector<std::vector<Rational>> cols(l, std::vector<Rational>(n));
    for (auto& c : cols)
      for (auto& v : c) {
        std::int64_t den = rng.between(1, 8);
        v = Rational(rng.between(0, den - 1), den);
        v.canonicalize();
      }
    auto want = oracle_small_combination(cols, eps);
    ASSERT_TRUE(want.has_value());
    EXPECT_TRUE(combination_is_small(cols, *want, eps));
    for (auto strategy : {SearchStrategy::Enumeration, SearchStrategy::LatticeReduction}) {
      auto d = small_combination(cols, eps, SearchBudget{strategy});
      EXPECT_TRUE(combination_is_small(cols, d, eps));
      EXPECT_EQ(gcd_of(d), 1);
    }
    // the norm-ordered enumeration finds a vector as short as the oracle's
    auto e = small_combination(cols, eps, SearchBudget{SearchStrategy::Enumeration});
    Integer ne = 0, nw = 0;
    for (const auto& v : e) ne = std::max(ne, Integer(::abs(v)));
    for (const auto& v : *want) nw = std::max(nw, Integer(::abs(v)));
    EXPECT_EQ(ne, nw);
  }
}

TEST(SmallCombination, TwoDimensionalTargets) {
  Rng rng(10);
  for (int i = 0; i < 40; ++i) {
    RationalMatrix x = random_rational_matrix(rng, 2, 3, 8, 1);
    std::vector<std::vector<Rational>> cols(3, std::vector<Rational>(2));
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t r = 0; r < 2; ++r) cols[c][r] = x(r, c);
    for (auto strategy : {SearchStrategy::Enumeration, SearchStrategy::LatticeReduction}) {
      auto d = small_combination(cols, q(1, 3), SearchBudget{strategy});
      EXPECT_TRUE(combination_is_small(cols, d, q(1, 3)));
      EXPECT_EQ(gcd_of(d), 1);
    }
  }
}

TEST(SearchBudget, PigeonholeBound) {
  EXPECT_EQ(SearchBudget::pigeonhole_bound(2, 1, 3), 13);
  EXPECT_EQ(SearchBudget::pigeonhole_bound(4, 2, 2), 257);
  auto b = SearchBudget::pigeonhole({{q(5, 2)}, {q(1)}}, q(1, 2), SearchStrategy::Enumeration);
  EXPECT_EQ(b.max_abs_entry, 5);
  EXPECT_EQ(b.pigeonhole_k, 21);
  auto d = small_combination({{q(5, 2)}, {q(1)}}, q(1, 2), b);
  EXPECT_TRUE(combination_is_small({{q(5, 2)}, {q(1)}}, d, q(1, 2)));
}

TEST(ShrinkColumns, Examples) {
  RationalMatrix small{{q(1, 2), q(0), q(0), q(0)}, {q(0), q(1, 2), q(0), q(0)}};
  EXPECT_EQ(shrink_columns(small, q(1, 2)), UnimodularMatrix::identity(4));
  RationalMatrix x{{q(5, 2), q(1)}};
  UnimodularMatrix a = shrink_columns(x, q(1, 2), SearchBudget{SearchStrategy::Enumeration});
  EXPECT_EQ(a, UnimodularMatrix(IntMatrix{{1, 0}, {-2, 1}}));
  EXPECT_EQ(multiply(x, a.matrix()), (RationalMatrix{{q(1, 2), q(1)}}));
}

TEST(ShrinkColumns, RejectsWrongShape) {
  try {
    shrink_columns(RationalMatrix{{q(1), q(2), q(3)}, {q(1), q(2), q(3)}}, q(1, 2));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(ShrinkColumns, RandomTwoByFour) {
  Rng rng(4);
  for (int i = 0; i < 25; ++i) {
    RationalMatrix x = random_rational_matrix(rng, 2, 4, 8, 2);
    for (auto strategy : {SearchStrategy::Enumeration, SearchStrategy::LatticeReduction}) {
      UnimodularMatrix a = shrink_columns(x, q(1, 3), SearchBudget{strategy});
      EXPECT_EQ(oracle::det_cofactor(a.matrix()), 1);
      RationalMatrix xa = multiply(x, a.matrix());
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) EXPECT_LE(::abs(xa(r, c)), q(1, 3));
    }
  }
}

TEST(ShrinkColumns, AgreesWithBruteForceOnOneByTwo) {
  Rng rng(5);
  for (int i = 0; i < 60; ++i) {
    RationalMatrix x = random_rational_matrix(rng, 1, 2, 8, 2);
    auto brute = oracle_shrink_1x2(x(0, 0), x(0, 1), q(1, 3));
    ASSERT_TRUE(brute.has_value());
    EXPECT_LE(::abs(x(0, 0) * (*brute)(0, 0) + x(0, 1) * (*brute)(1, 0)), q(1, 3));
    UnimodularMatrix a = shrink_columns(x, q(1, 3));
    EXPECT_LE(::abs(multiply(x, a.matrix())(0, 0)), q(1, 3));
  }
}

TEST(TorusAbsorb, Examples) {
  EXPECT_EQ(torus_absorb({{q(0), q(0)}}, 2, {0}, q(1, 10)), UnimodularMatrix::identity(2));
  EXPECT_EQ(torus_absorb({{q(1, 20), q(3, 5)}}, 2, {0}, q(1, 10)), UnimodularMatrix::identity(2));
  std::vector<std::vector<Rational>> f = {{q(2, 5), q(1, 3)}};
  UnimodularMatrix a = torus_absorb(f, 2, {0}, q(1, 10));
  EXPECT_TRUE(in_box(f, a, {0}, q(1, 10)));
  // the hand-found matrix is an equally valid answer
  UnimodularMatrix hand(IntMatrix{{5, 1}, {-6, -1}});
  EXPECT_EQ(hand.act(f[0], true), (std::vector<Rational>{q(0), q(1, 15)}));
  EXPECT_TRUE(in_box(f, hand, {0}, q(1, 10)));
}

TEST(TorusAbsorb, DimensionTooSmall) {
  try {
    torus_absorb({{q(1, 2), q(1, 3)}}, 2, {}, q(1, 10));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionTooSmall);
  }
}

TEST(TorusAbsorb, RandomPointSets) {
  Rng rng(6);
  for (int i = 0; i < 40; ++i) {
    std::size_t count = 1 + rng.below(2);
    auto pts = random_torus_points(rng, 6, count, 12);
    std::vector<std::size_t> coords = {0};
    if (rng.below(2)) coords.push_back(3);
    UnimodularMatrix a = torus_absorb(pts, 6, coords, q(1, 10));
    EXPECT_TRUE(in_box(pts, a, coords, q(1, 10)));
    EXPECT_EQ(determinant(a.matrix()), 1);
  }
}

TEST(BlockLift, ActsPerBlock) {
  UnimodularMatrix a(IntMatrix{{5, 1}, {-6, -1}});
  EXPECT_EQ(block_diagonal_lift(a, 1), a);
  EXPECT_EQ(block_diagonal_lift(UnimodularMatrix::identity(2), 3), UnimodularMatrix::identity(6));
  UnimodularMatrix big = block_diagonal_lift(a, 2);
  std::vector<Rational> p = {q(2, 5), q(1, 3)};
  std::vector<Rational> pp = {q(2, 5), q(1, 3), q(2, 5), q(1, 3)};
  auto img = big.act(pp, true);
  auto one = a.act(p, true);
  EXPECT_EQ(img, (std::vector<Rational>{one[0], one[1], one[0], one[1]}));
  Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    auto blocks = random_torus_points(rng, 2, 3, 12);
    std::vector<Rational> flat;
    for (auto& b : blocks) flat.insert(flat.end(), b.begin(), b.end());
    auto lifted = block_diagonal_lift(a, 3).act(flat, true);
    for (std::size_t k = 0; k < 3; ++k) {
      auto per = a.act(blocks[k], true);
      EXPECT_EQ(lifted[2 * k], per[0]);
      EXPECT_EQ(lifted[2 * k + 1], per[1]);
    }
  }
}

TEST(Registry, ExamplesAndMemoization) {
  AbsorbingFamilyRegistry reg("H", 2, {UnimodularMatrix(IntMatrix{{5, 1}, {-6, -1}})});
  auto zero = reg.absorb({{q(0), q(0)}}, Neighborhood::eps_box(q(1, 10)));
  EXPECT_EQ(zero.shrink, UnimodularMatrix::identity(2));
  std::size_t before = reg.entries().size();
  auto first = reg.absorb({{q(2, 5), q(1, 3)}}, Neighborhood::eps_box(q(1, 10)));
  EXPECT_FALSE(first.memo_hit);
  EXPECT_EQ(first.shrink.act({q(2, 5), q(1, 3)}, true), (std::vector<Rational>{q(0), q(1, 15)}));
  auto second = reg.absorb({{q(2, 5), q(1, 3)}}, Neighborhood::eps_box(q(1, 10)));
  EXPECT_TRUE(second.memo_hit);
  EXPECT_EQ(first.shrink, second.shrink);
  EXPECT_EQ(reg.entries().size(), before + 0);  // reused the seed
  Automorphism alpha = registry_absorb(reg, {{q(2, 5), q(1, 3)}}, Neighborhood::eps_box(q(1, 10)));
  EXPECT_EQ(aut_act(alpha, Element::torus({q(2, 5), q(1, 3)}), Automorphism::Direction::Inverse),
            Element::torus({q(0), q(1, 15)}));
}

TEST(Registry, FallsBackToEnumerationInTwoDimensions) {
  AbsorbingFamilyRegistry reg("H", 2);
  Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    auto pts = random_torus_points(rng, 2, 1, 12);
    auto r = reg.absorb(pts, Neighborhood::eps_box(q(1, 10), {0}));
    EXPECT_TRUE(in_box(pts, r.shrink, {0}, q(1, 10)));
    EXPECT_TRUE(reg.absorb(pts, Neighborhood::eps_box(q(1, 10), {0})).memo_hit);
  }
  try {
    reg.absorb({{q(1, 2), q(1, 2)}}, Neighborhood::eps_box(q(1, 10)));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AbsorptionFailed);
  }
}

TEST(Registry, ConcurrentInsertsResolveToOneEntry) {
  AbsorbingFamilyRegistry reg("H", 4);
  std::vector<std::vector<Rational>> pts = {{q(2, 5), q(1, 3), q(5, 7), q(1, 11)}};
  auto box = Neighborhood::eps_box(q(1, 10), {0, 1});
  std::vector<UnimodularMatrix> seen(8, UnimodularMatrix::identity(4));
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < seen.size(); ++t) {
    threads.emplace_back([&, t] { seen[t] = reg.absorb(pts, box).shrink; });
  }
  for (auto& t : threads) t.join();
  for (const auto& s : seen) EXPECT_EQ(s, seen[0]);
  EXPECT_EQ(reg.entries().size(), 1u);
}

TEST(Registry, RestoreReplaysMembership) {
  AbsorbingFamilyRegistry reg("H", 4);
  Rng rng(9);
  auto box = Neighborhood::eps_box(q(1, 10), {0, 1});
  std::vector<std::vector<std::vector<Rational>>> queries;
  for (int i = 0; i < 10; ++i) {
    queries.push_back(random_torus_points(rng, 4, 1, 12));
    reg.absorb(queries.back(), box);
  }
  AbsorbingFamilyRegistry copy("H", 4);
  for (const auto& e : reg.entries()) copy.restore(e);
  for (const auto& pts : queries) {
    auto r = copy.absorb(pts, box);
    EXPECT_TRUE(r.memo_hit || reg.absorb(pts, box).shrink == r.shrink);
    EXPECT_TRUE(in_box(pts, r.shrink, {0, 1}, q(1, 10)));
  }
}
