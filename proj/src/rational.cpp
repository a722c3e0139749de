#include "duomagma/rational.hpp"

#include "duomagma/error.hpp"

#include <cctype>

namespace duomagma {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnitLawViolation: return "UnitLawViolation";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonInvertibleMatrix: return "NonInvertibleMatrix";
    case ErrorCode::BadBreakpoints: return "BadBreakpoints";
    case ErrorCode::NotAHomomorphism: return "NotAHomomorphism";
    case ErrorCode::BadInterval: return "BadInterval";
    case ErrorCode::NotUnitNeighborhood: return "NotUnitNeighborhood";
    case ErrorCode::NotInHM0: return "NotInHM0";
    case ErrorCode::NoInverse: return "NoInverse";
    case ErrorCode::NormalizationError: return "NormalizationError";
    case ErrorCode::AbsorptionFailed: return "AbsorptionFailed";
    case ErrorCode::NotPrimitive: return "NotPrimitive";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::MalformedCertificate: return "MalformedCertificate";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::BadSqueezeMap: return "BadSqueezeMap";
  }
  return "Unknown";
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw Error(ErrorCode::SchemaError, "not a rational: '" + std::string(text) + "'");
  }
  std::string n(num);
  if (n[0] == '+') n.erase(0, 1);
  Integer d{std::string(den)};
  if (d == 0) throw Error(ErrorCode::SchemaError, "zero denominator: '" + std::string(text) + "'");
  Rational r(Integer(n), d);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& r) { return r.get_str(); }

Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rational frac(const Rational& r) { return r - Rational(floor(r)); }

Rational dist_to_integer(const Rational& r) {
  Rational f = frac(r);
  Rational g = 1 - f;
  return f < g ? f : g;
}

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

Integer lcm_of_denominators(const std::vector<Rational>& values) {
  Integer l = 1;
  for (const auto& v : values) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  }
  return l;
}

}  // namespace duomagma
