#pragma once

#include "duomagma/magma.hpp"
#include "duomagma/matrix.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

namespace duomagma {

enum class SearchStrategy { Enumeration, LatticeReduction };

/// Limits for the small-combination search.
///
/// `pigeonhole_k`, when positive, caps the coefficient radius at 2K: any
/// primitive d found by the pigeonhole argument over {-K..K}^l has entries
/// bounded by 2K. With K > (2 l M)^n a solution is guaranteed to exist inside
/// that cap, where M bounds the entries of the columns in units of eps.
struct SearchBudget {
  SearchStrategy strategy = SearchStrategy::LatticeReduction;
  std::uint64_t timeout_steps = 4'000'000;
  Integer max_abs_entry = 0;  // M, informational
  Integer pigeonhole_k = 0;   // 0: radius limited by timeout_steps only

  /// (2 l M)^n + 1.
  static Integer pigeonhole_bound(std::size_t l, std::size_t n, const Integer& m);
  /// Smallest M >= 1 with every entry of `columns` at most M * eps in
  /// absolute value. Requires eps > 0.
  static Integer entry_bound(const std::vector<std::vector<Rational>>& columns, const Rational& eps);
  /// Budget whose radius meets the pigeonhole guarantee for `columns`.
  static SearchBudget pigeonhole(const std::vector<std::vector<Rational>>& columns, const Rational& eps,
                                 SearchStrategy strategy);
};

/// (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g.
std::tuple<Integer, Integer, Integer> extended_gcd(const Integer& a, const Integer& b);

Integer gcd_of(const std::vector<Integer>& v);

/// D in SL(l,Z) whose last column is d. Throws NotPrimitive unless gcd(d) = 1
/// (and, for l = 1, unless d = (1)).
UnimodularMatrix primitive_completion(const std::vector<Integer>& d);

/// LLL-reduced basis (rows) of the lattice spanned by the rows of `basis`.
IntMatrix lll_reduce(const IntMatrix& basis, const Rational& delta = Rational(3, 4));

/// True when every coordinate of sum_i d_i * columns[i] is at most eps in
/// absolute value.
bool combination_is_small(const std::vector<std::vector<Rational>>& columns,
                          const std::vector<Integer>& d, const Rational& eps);

/// Primitive nonzero d with every coordinate of sum_i d_i y_i at most eps.
/// `columns` holds y_1..y_l, each of length n. Throws BudgetExhausted.
std::vector<Integer> small_combination(const std::vector<std::vector<Rational>>& columns,
                                       const Rational& eps, const SearchBudget& budget = {});

/// Number of columns of `x` whose entries are all at most eps in absolute value.
std::size_t count_small_columns(const RationalMatrix& x, const Rational& eps);

/// A in SL(2n,Z) such that the first n columns of X*A are small, for X of
/// shape n x 2n. Greedy: while fewer than n columns are small, combine the
/// remaining columns into one small column through a completed primitive
/// vector, then move small columns to the front.
UnimodularMatrix shrink_columns(const RationalMatrix& x, const Rational& eps,
                                const SearchBudget& budget = {});

/// A in SL(m,Z) with every point of `points` (in T^m) moved by v -> v*A into
/// the box {dist(v_i, Z) <= eps for i in coords}; empty `coords` means all
/// coordinates. Requires m >= 2 * max(|points|, |coords|).
UnimodularMatrix torus_absorb(const std::vector<std::vector<Rational>>& points, std::size_t m,
                              const std::vector<std::size_t>& coords, const Rational& eps,
                              const SearchBudget& budget = {});

/// Brute-force search of SL(2,Z) with entries in [-bound, bound]; used when a
/// 2-dimensional query is outside the guarantee of torus_absorb.
std::optional<UnimodularMatrix> enumerate_sl2_absorb(const std::vector<std::vector<Rational>>& points,
                                                     const std::vector<std::size_t>& coords,
                                                     const Rational& eps, int bound);

/// blockdiag(A, ..., A) with k blocks.
UnimodularMatrix block_diagonal_lift(const UnimodularMatrix& a, std::size_t k);

/// Append-only family of torus automorphisms grown on demand. Each entry is a
/// shrinking matrix A (points p satisfy p*A in the queried box); the absorbing
/// automorphism is alpha = A^-1, so that the points lie in alpha(U).
///
/// Thread-safe: concurrent readers, linearizable appends; racing inserts for
/// one key resolve to the first stored entry.
class AbsorbingFamilyRegistry {
 public:
  struct Entry {
    std::string key;  // empty for seeds
    UnimodularMatrix shrink;
  };
  struct Result {
    UnimodularMatrix shrink;
    bool memo_hit = false;
  };

  AbsorbingFamilyRegistry(std::string id, std::size_t dimension,
                          std::vector<UnimodularMatrix> seeds = {});

  const std::string& id() const { return id_; }
  std::size_t dimension() const { return dimension_; }

  std::vector<Entry> entries() const;
  std::size_t memo_hits() const { return memo_hits_.load(); }

  /// Re-inserts a serialized entry; keyed entries are memoized again.
  void restore(Entry entry);

  /// Absorbs `points` into the box `u` (EpsBox or Whole): memo lookup, then
  /// the identity, then stored matrices in insertion order, then a fresh
  /// torus_absorb (falling back to SL(2,Z) enumeration in dimension 2).
  /// Throws AbsorptionFailed or DimensionTooSmall.
  Result absorb(const std::vector<std::vector<Rational>>& points, const Neighborhood& u,
                const SearchBudget& budget = {});

  /// Canonical key of a query: sorted points plus the box.
  static std::string fingerprint(std::vector<std::vector<Rational>> points, const Neighborhood& u);

 private:
  std::string id_;
  std::size_t dimension_;
  mutable std::shared_mutex mutex_;
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> by_key_;
  std::atomic<std::size_t> memo_hits_{0};
};

/// alpha with points in alpha(U), i.e. alpha^-1(points) inside U.
Automorphism registry_absorb(AbsorbingFamilyRegistry& registry,
                             const std::vector<std::vector<Rational>>& points, const Neighborhood& u);

/// T^d x H where H is generated by the registry (seeded with `seeds`).
MagmaPtr torus_duo_group(std::size_t d, std::vector<UnimodularMatrix> seeds = {},
                         std::string registry_id = "H");

}  // namespace duomagma
