#include "duomagma/element.hpp"

#include "duomagma/error.hpp"

#include <algorithm>

namespace duomagma {

Element Element::atom(std::string name) { return Element(AtomRep{std::move(name)}); }

Element Element::vector(std::vector<Rational> coords) { return Element(VectorRep{std::move(coords)}); }

Element Element::torus(std::vector<Rational> coords) {
  for (auto& c : coords) c = frac(c);
  return Element(TorusRep{std::move(coords)});
}

Element Element::step(StepFunction f) {
  return Element(std::make_shared<const StepFunction>(std::move(f)));
}

Element Element::pair(Element left, Right right) {
  return Element(std::make_shared<const PairRep>(PairRep{std::move(left), std::move(right)}));
}

Element::Kind Element::kind() const { return static_cast<Kind>(rep_.index()); }

const std::string& Element::atom_name() const {
  if (auto* a = std::get_if<AtomRep>(&rep_)) return a->name;
  throw Error(ErrorCode::ShapeMismatch, "element is not a finite atom");
}

const std::vector<Rational>& Element::coords() const {
  if (auto* v = std::get_if<VectorRep>(&rep_)) return v->coords;
  if (auto* t = std::get_if<TorusRep>(&rep_)) return t->coords;
  throw Error(ErrorCode::ShapeMismatch, "element has no coordinates");
}

const StepFunction& Element::step() const {
  if (auto* s = std::get_if<std::shared_ptr<const StepFunction>>(&rep_)) return **s;
  throw Error(ErrorCode::ShapeMismatch, "element is not a step function");
}

const Element& Element::left() const {
  if (auto* p = std::get_if<std::shared_ptr<const PairRep>>(&rep_)) return (*p)->left;
  throw Error(ErrorCode::ShapeMismatch, "element is not a pair");
}

const Element::Right& Element::right() const {
  if (auto* p = std::get_if<std::shared_ptr<const PairRep>>(&rep_)) return (*p)->right;
  throw Error(ErrorCode::ShapeMismatch, "element is not a pair");
}

std::int64_t Element::exponent() const {
  if (auto* n = std::get_if<std::int64_t>(&right())) return *n;
  throw Error(ErrorCode::ShapeMismatch, "pair has no integer right factor");
}

const UnimodularMatrix& Element::automorphism() const {
  if (auto* m = std::get_if<UnimodularMatrix>(&right())) return *m;
  throw Error(ErrorCode::ShapeMismatch, "pair has no automorphism right factor");
}

bool operator==(const Element& a, const Element& b) {
  if (a.rep_.index() != b.rep_.index()) return false;
  switch (a.kind()) {
    case Element::Kind::Atom: return a.atom_name() == b.atom_name();
    case Element::Kind::Vector:
    case Element::Kind::Torus: return a.coords() == b.coords();
    case Element::Kind::Step: {
      const auto& pa = std::get<std::shared_ptr<const StepFunction>>(a.rep_);
      const auto& pb = std::get<std::shared_ptr<const StepFunction>>(b.rep_);
      return pa == pb || *pa == *pb;
    }
    case Element::Kind::Pair: {
      const auto& pa = std::get<std::shared_ptr<const Element::PairRep>>(a.rep_);
      const auto& pb = std::get<std::shared_ptr<const Element::PairRep>>(b.rep_);
      return pa == pb || (pa->right == pb->right && pa->left == pb->left);
    }
  }
  return false;
}

StepFunction StepFunction::canonicalize(std::vector<Piece> raw) {
  if (raw.empty() || raw.front().start != 0) {
    throw Error(ErrorCode::BadBreakpoints, "first breakpoint must be 0");
  }
  StepFunction f;
  f.pieces_.reserve(raw.size());
  for (auto& p : raw) {
    if (p.start < 0 || p.start >= 1) throw Error(ErrorCode::BadBreakpoints, "breakpoint outside [0,1)");
    if (!f.pieces_.empty()) {
      if (p.start <= f.pieces_.back().start) {
        throw Error(ErrorCode::BadBreakpoints, "breakpoints must strictly increase");
      }
      if (p.value == f.pieces_.back().value) continue;
    }
    f.pieces_.push_back(std::move(p));
  }
  return f;
}

StepFunction StepFunction::constant(Element value) {
  StepFunction f;
  f.pieces_.push_back({Rational(0), std::move(value)});
  return f;
}

Rational StepFunction::piece_end(std::size_t i) const {
  return i + 1 < pieces_.size() ? pieces_[i + 1].start : Rational(1);
}

const Element& StepFunction::value_at(const Rational& t) const {
  if (t < 0 || t >= 1) throw Error(ErrorCode::BadInterval, "evaluation point outside [0,1)");
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](const Rational& v, const Piece& p) { return v < p.start; });
  return std::prev(it)->value;
}

bool operator==(const StepFunction& a, const StepFunction& b) {
  if (a.pieces_.size() != b.pieces_.size()) return false;
  for (std::size_t i = 0; i < a.pieces_.size(); ++i) {
    if (a.pieces_[i].start != b.pieces_[i].start || a.pieces_[i].value != b.pieces_[i].value) {
      return false;
    }
  }
  return true;
}

}  // namespace duomagma
