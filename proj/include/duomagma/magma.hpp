#pragma once

#include "duomagma/element.hpp"
#include "duomagma/squeeze.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace duomagma {

class AbsorbingFamilyRegistry;
class Magma;
using MagmaPtr = std::shared_ptr<const Magma>;

/// Descriptor of a unital topologized magma. Descriptors are immutable trees
/// shared by pointer; the only mutable part reachable from one is the
/// append-only registry of a SemidirectAut node.
class Magma {
 public:
  enum class Kind { Finite, Vector, Torus, HM0, SemidirectZ, SemidirectAut };

  struct Finite {
    std::vector<std::string> elements;
    std::vector<std::vector<std::size_t>> table;  // table[i][j] = index of e_i * e_j
    std::size_t unit = 0;
    bool associative = false;
    std::unordered_map<std::string, std::size_t> index;

    std::optional<std::size_t> find(const std::string& name) const;
  };
  struct Vector { std::size_t dim; };
  struct Torus { std::size_t dim; };
  struct HM0 { MagmaPtr base; SqueezeMap squeeze; };
  struct SemidirectZ { MagmaPtr base; SqueezeMap squeeze; };  // base is an HM0 node
  struct SemidirectAut { MagmaPtr base; std::shared_ptr<AbsorbingFamilyRegistry> registry; };

  using Rep = std::variant<Finite, Vector, Torus, HM0, SemidirectZ, SemidirectAut>;

  explicit Magma(Rep rep) : rep_(std::move(rep)) {}

  Kind kind() const { return static_cast<Kind>(rep_.index()); }
  const Rep& rep() const { return rep_; }

  const Finite& finite() const;
  std::size_t dim() const;  // Vector or Torus
  const HM0& hm0() const;
  const SemidirectZ& semidirect_z() const;
  const SemidirectAut& semidirect_aut() const;

 private:
  Rep rep_;
};

/// Builds a finite unital magma from a Cayley table given by symbol. Throws
/// UnknownSymbol for symbols outside `elements` and UnitLawViolation when
/// `unit` is not a two-sided unit. Associativity is recorded, not required.
MagmaPtr mk_finite_magma(const std::vector<std::string>& elements,
                         const std::vector<std::vector<std::string>>& table,
                         const std::string& unit);

/// Cyclic group Z/n written additively; symbols default to "0".."n-1" with
/// the first symbol as the unit.
MagmaPtr cyclic_group(std::size_t order, std::vector<std::string> symbols = {});

MagmaPtr rational_vector_group(std::size_t dim);
MagmaPtr rational_torus(std::size_t dim);
MagmaPtr hm0_of(MagmaPtr base, SqueezeMap squeeze = SqueezeMap::standard());
/// X x_alpha Z where X must be an HM0 node and alpha is induced by `squeeze`.
MagmaPtr semidirect_z(MagmaPtr hm0_base, SqueezeMap squeeze);
MagmaPtr semidirect_aut(MagmaPtr torus_base, std::shared_ptr<AbsorbingFamilyRegistry> registry);

Element unit_of(const Magma& m);
bool belongs(const Magma& m, const Element& x);
void require_member(const Magma& m, const Element& x);

bool is_associative(const Magma& m);
bool is_group(const Magma& m);

/// x * y per descriptor; ShapeMismatch if x or y do not belong to m.
Element op_apply(const Magma& m, const Element& x, const Element& y);
/// Same as op_apply without the membership check; callers guarantee shape.
Element op_apply_unchecked(const Magma& m, const Element& x, const Element& y);
/// Two-sided inverse; NoInverse when m is not a group.
Element inverse_of(const Magma& m, const Element& x);

/// Symbolic neighbourhood of the unit.
class Neighborhood {
 public:
  enum class Kind { EpsBox, Subset, HMSubbasic, Intersection, ProductDiscrete, Whole };

  /// Max-norm box around 0; restricted to `coords` when non-empty. On a torus
  /// the distance is to the nearest integer.
  struct EpsBox {
    Rational eps;
    std::vector<std::size_t> coords;
    friend bool operator==(const EpsBox&, const EpsBox&) = default;
  };
  struct Subset { std::vector<Element> members; };
  /// {f : measure([a,b) \ f^-1(inner)) < eps}
  struct HMSubbasic {
    std::shared_ptr<const Neighborhood> inner;
    Rational a, b, eps;
  };
  struct Intersection { std::vector<Neighborhood> parts; };
  /// base x {discrete unit} in a semidirect product.
  struct ProductDiscrete { std::shared_ptr<const Neighborhood> base; };
  struct Whole {};

  static Neighborhood eps_box(Rational eps, std::vector<std::size_t> coords = {});
  static Neighborhood subset(std::vector<Element> members);
  static Neighborhood hm_subbasic(Neighborhood inner, Rational a, Rational b, Rational eps);
  static Neighborhood intersection(std::vector<Neighborhood> parts);
  static Neighborhood product_discrete(Neighborhood base);
  static Neighborhood whole();

  Kind kind() const { return static_cast<Kind>(rep_.index()); }

  const EpsBox& eps_box() const { return std::get<EpsBox>(rep_); }
  const Subset& subset() const { return std::get<Subset>(rep_); }
  const HMSubbasic& hm_subbasic() const { return std::get<HMSubbasic>(rep_); }
  const Intersection& intersection() const { return std::get<Intersection>(rep_); }
  const ProductDiscrete& product_discrete() const { return std::get<ProductDiscrete>(rep_); }

  friend bool operator==(const Neighborhood& a, const Neighborhood& b);

 private:
  using Rep = std::variant<EpsBox, Subset, HMSubbasic, Intersection, ProductDiscrete, Whole>;
  explicit Neighborhood(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

bool nbhd_member(const Magma& m, const Neighborhood& u, const Element& x);

/// Conjunction of two neighbourhoods, fusing boxes and subsets where possible.
Neighborhood nbhd_intersect(const Neighborhood& u1, const Neighborhood& u2);

class Automorphism {
 public:
  enum class Kind { FinitePermutation, Matrix, SqueezePower, Composite };
  enum class Direction { Forward, Inverse };

  struct FinitePermutation { std::map<std::string, std::string> map; };
  struct Matrix { UnimodularMatrix matrix; };
  struct SqueezePower { std::int64_t k; SqueezeMap squeeze; };
  /// parts[0] o parts[1] o ... : the last part is applied first.
  struct Composite { std::vector<Automorphism> parts; };

  /// Validates bijectivity, the unit as a fixed point, and preservation of
  /// the table; throws NotAHomomorphism otherwise.
  static Automorphism finite_permutation(const Magma& m, std::map<std::string, std::string> map);
  static Automorphism matrix(UnimodularMatrix a);
  static Automorphism squeeze_power(std::int64_t k, SqueezeMap s = SqueezeMap::standard());
  static Automorphism composite(std::vector<Automorphism> parts);

  Kind kind() const { return static_cast<Kind>(rep_.index()); }
  const FinitePermutation& finite() const { return std::get<FinitePermutation>(rep_); }
  const Matrix& as_matrix() const { return std::get<Matrix>(rep_); }
  const SqueezePower& squeeze_power() const { return std::get<SqueezePower>(rep_); }
  const Composite& composite() const { return std::get<Composite>(rep_); }

 private:
  using Rep = std::variant<FinitePermutation, Matrix, SqueezePower, Composite>;
  explicit Automorphism(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

Element aut_act(const Automorphism& alpha, const Element& x,
                Automorphism::Direction direction = Automorphism::Direction::Forward);

}  // namespace duomagma
