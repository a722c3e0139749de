#pragma once

#include "duomagma/matrix.hpp"
#include "duomagma/rational.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace duomagma {

class StepFunction;

/// Immutable element of some magma. Equality is structural over canonical
/// forms; torus coordinates are always reduced into [0,1).
class Element {
 public:
  enum class Kind { Atom, Vector, Torus, Step, Pair };
  /// Right factor of a semidirect pair: an exponent or an automorphism matrix.
  using Right = std::variant<std::int64_t, UnimodularMatrix>;

  static Element atom(std::string name);
  static Element vector(std::vector<Rational> coords);
  static Element torus(std::vector<Rational> coords);
  static Element step(StepFunction f);
  static Element pair(Element left, Right right);

  Kind kind() const;

  const std::string& atom_name() const;
  const std::vector<Rational>& coords() const;  // Vector or Torus
  const StepFunction& step() const;
  const Element& left() const;
  const Right& right() const;
  std::int64_t exponent() const;          // Pair with integer right factor
  const UnimodularMatrix& automorphism() const;  // Pair with matrix right factor

  friend bool operator==(const Element& a, const Element& b);
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

 private:
  struct AtomRep { std::string name; };
  struct VectorRep { std::vector<Rational> coords; };
  struct TorusRep { std::vector<Rational> coords; };
  struct PairRep;
  using Rep = std::variant<AtomRep, VectorRep, TorusRep, std::shared_ptr<const StepFunction>,
                           std::shared_ptr<const PairRep>>;

  explicit Element(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

struct Element::PairRep {
  Element left;
  Right right;
};

/// Piecewise-constant function [0,1) -> X in canonical form: the first piece
/// starts at 0, starts strictly increase, adjacent values differ. The final
/// endpoint 1 is implicit.
class StepFunction {
 public:
  struct Piece {
    Rational start;
    Element value;
  };

  /// Merges equal neighbours; throws BadBreakpoints if starts are not a
  /// strictly increasing sequence in [0,1) beginning at 0.
  static StepFunction canonicalize(std::vector<Piece> raw);
  static StepFunction constant(Element value);

  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }

  /// End of piece i (1 for the last piece).
  Rational piece_end(std::size_t i) const;
  const Element& value_at(const Rational& t) const;

  friend bool operator==(const StepFunction& a, const StepFunction& b);

 private:
  StepFunction() = default;
  std::vector<Piece> pieces_;
};

}  // namespace duomagma
