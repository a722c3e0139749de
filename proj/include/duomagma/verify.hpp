#pragma once

#include "duomagma/hm.hpp"
#include "duomagma/magma.hpp"
#include "duomagma/semidirect.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace duomagma {

enum class Shape { Left, Right, Duo, Roelcke, Preseparable };
enum class Cardinality { Separable, Precompact, Narrow };

struct CoverageMode {
  Shape shape = Shape::Duo;
  Cardinality cardinality = Cardinality::Separable;
  friend bool operator==(const CoverageMode&, const CoverageMode&) = default;
};

std::string to_string(Shape s);
std::string to_string(Cardinality c);
Shape parse_shape(const std::string& s);
Cardinality parse_cardinality(const std::string& s);

enum class Slot { S, U, F };

/// Slot tags expected for each shape:
///   left          S U
///   right         U S
///   duo           S U S
///   roelcke       U S U
///   preseparable  S U F F U S  (x = s(uf) = (su)f and x = f'(u's') = (f'u')s')
std::vector<Slot> expected_slots(Shape shape);

/// One factorization instance of `element`. S-slots are checked against
/// `s_set` when present, otherwise against the canonical countable set of the
/// descriptor (built semidirect products, or all of a finite magma). F-slots
/// always need `f_set`.
struct WitnessCertificate {
  CoverageMode mode;
  MagmaPtr magma;
  Element element;
  Neighborhood neighborhood;
  std::vector<Element> witness;
  std::vector<Slot> slots;
  Association association = Association::Left;
  std::optional<std::vector<Element>> s_set;
  std::optional<std::vector<Element>> f_set;
};

struct Verdict {
  bool pass = true;
  std::string clause;  // empty on pass
  std::string detail;
};

/// Clauses, first failure wins: unit-neighborhood, s-membership,
/// u-membership, f-membership, product-mismatch, second-association-mismatch,
/// and for preseparable f-left-mismatch, f-left-second-association-mismatch.
/// Throws MalformedCertificate when the tuple does not fit the mode.
Verdict check_certificate(const WitnessCertificate& c);

/// Duo/separable certificate for a witness computed by duo_witness_z or
/// duo_witness_group.
WitnessCertificate certificate_from_witness(MagmaPtr magma, const Element& element,
                                            const Neighborhood& u, const DuoWitness& w);

// --- independent oracles ------------------------------------------------------

/// Exhaustive search over the coefficient cube [-2K, 2K]^l in scaled 64-bit
/// arithmetic. Returns the passing primitive vector that is smallest in max
/// norm, ties broken lexicographically, with its first nonzero entry
/// positive; nullopt if none exists in the cube. K defaults to (2 l M)^n + 1
/// (10 when eps = 0). Throws InstanceTooLarge for l > 3, n > 2 or K > 100.
std::optional<std::vector<Integer>> oracle_small_combination(const std::vector<std::vector<Rational>>& columns,
                                                             const Rational& eps);

/// Brute-force shrinking of a 1 x 2 row [a, b]: the first column is searched
/// directly, then completed to SL(2,Z) by a second search.
std::optional<UnimodularMatrix> oracle_shrink_1x2(const Rational& a, const Rational& b, const Rational& eps,
                                                  int radius = 60);

/// Membership in a subbasic set recomputed by evaluating f at the midpoint of
/// each refined interval.
bool oracle_step_membership(const Magma& base, const StepFunction& f, const Neighborhood::HMSubbasic& n);

// --- seeded generators ----------------------------------------------------------

/// mt19937_64 with explicit modulo mapping so that streams agree across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  Rational rational(std::int64_t max_den, std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 gen_;
};

/// Step function in HM0(base): unit on the first piece, at most `max_pieces`
/// pieces, breakpoints with denominators up to `max_den`.
StepFunction random_step_function(Rng& rng, const Magma& base, std::size_t max_pieces, std::int64_t max_den);

/// Unit neighbourhood of HM0(base): a subbasic set with inner {unit} or the
/// whole base, interval [a, b) and eps drawn from small dyadics.
Neighborhood random_hm_neighborhood(Rng& rng, const Magma& base);

std::vector<std::vector<Rational>> random_torus_points(Rng& rng, std::size_t dim, std::size_t count,
                                                       std::int64_t max_den);

RationalMatrix random_rational_matrix(Rng& rng, std::size_t rows, std::size_t cols, std::int64_t max_den,
                                      std::int64_t max_abs);

enum class InstanceKind { StepFunction, TorusPointSet, ShrinkMatrix, Certificate };
InstanceKind parse_instance_kind(const std::string& s);

using Instance = std::variant<StepFunction, std::vector<std::vector<Rational>>, RationalMatrix, WitnessCertificate>;

/// step-function: HM0(C3), at most 6 pieces, denominators <= 12.
/// torus-point-set: 1 or 2 points of T^2 or T^4, denominators <= 12.
/// shrink-matrix: 2 x 4, denominators <= 8, entries in [-2, 2].
/// certificate: a duo witness over F(C2) or F(C3), tampered for odd draws.
Instance random_instance(InstanceKind kind, std::uint64_t seed);

// --- tampering --------------------------------------------------------------------

enum class Tamper { Element, S1, U, S2, Neighborhood };
std::string to_string(Tamper t);

/// Single-field modification of a passing duo certificate over a built
/// semidirect product; the result must fail verification. Neighbourhood
/// tampering needs u to have positive defect and returns nullopt otherwise.
std::optional<WitnessCertificate> tamper(const WitnessCertificate& c, Tamper t);

/// Defect of the U-slot of a duo certificate against its neighbourhood:
/// measure outside the normalized inner set for HM0 bases, max box distance
/// for tori.
Rational witness_defect(const WitnessCertificate& c);

}  // namespace duomagma
