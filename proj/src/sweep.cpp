#include "duomagma/sweep.hpp"

#include "duomagma/error.hpp"
#include "duomagma/json_io.hpp"
#include "duomagma/unimodular.hpp"

namespace duomagma {

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the pair
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index + 1;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

SuiteResult tally(const std::vector<char>& ok) {
  SuiteResult r{ok.size(), 0};
  for (char c : ok) r.failures += c ? 0 : 1;
  return r;
}

}  // namespace

SuiteResult membership_crosscheck(std::uint64_t seed, std::size_t count, bool parallel, bool inject_fault) {
  MagmaPtr c3 = cyclic_group(3);
  auto ok = sweep_map<char>(
      count,
      [&](std::size_t i) -> char {
        Rng rng(case_seed(seed, i));
        StepFunction f = random_step_function(rng, *c3, 6, 12);
        std::vector<Element> members;
        for (const auto& e : c3->finite().elements)
          if (rng.below(2)) members.push_back(Element::atom(e));
        std::int64_t lo = rng.between(0, 11);
        Rational a(Integer(lo), Integer(12));
        Rational b(Integer(rng.between(lo + 1, 12)), Integer(12));
        a.canonicalize();
        b.canonicalize();
        Rational eps(Integer(rng.between(1, 16)), Integer(16));
        Neighborhood n = Neighborhood::hm_subbasic(Neighborhood::subset(members), a, b, eps);
        bool expected = oracle_step_membership(*c3, f, n.hm_subbasic());
        if (inject_fault && i == 0) expected = !expected;
        return hm_nbhd_member(*c3, f, n.hm_subbasic()) == expected;
      },
      parallel);
  return tally(ok);
}

SuiteResult small_combination_crosscheck(std::uint64_t seed, std::size_t count, bool parallel) {
  auto ok = sweep_map<char>(
      count,
      [&](std::size_t i) -> char {
        Rng rng(case_seed(seed, i));
        std::size_t l = 2, n = 1;
        Rational eps;
        switch (i % 3) {
          case 0: eps = Rational(1, 2 + static_cast<long>(rng.below(7))); break;
          case 1: l = 3; eps = Rational(1, 2); break;
          default: l = 3; n = 2; eps = Rational(1, 2); break;
        }
        std::vector<std::vector<Rational>> cols(l, std::vector<Rational>(n));
        for (auto& c : cols)
          for (auto& v : c) {
            std::int64_t den = rng.between(1, 8);
            v = Rational(Integer(rng.between(0, den - 1)), Integer(den));
            v.canonicalize();
          }
        auto fast = small_combination(cols, eps);
        bool ok = combination_is_small(cols, fast, eps) && gcd_of(fast) == 1;
        if (n == 2) {
          // the pigeonhole bound is past the oracle's reach here; check the other strategy instead
          auto slow = small_combination(cols, eps, SearchBudget{SearchStrategy::Enumeration});
          return ok && combination_is_small(cols, slow, eps) && gcd_of(slow) == 1;
        }
        auto oracle = oracle_small_combination(cols, eps);
        return ok && oracle && combination_is_small(cols, *oracle, eps) && gcd_of(*oracle) == 1;
      },
      parallel);
  return tally(ok);
}

WitnessCertificate random_tamperable_certificate(std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(case_seed(seed, attempt));
    MagmaPtr base = cyclic_group(2 + rng.below(2));
    MagmaPtr f = build_F(base);
    Element x = Element::pair(Element::step(random_step_function(rng, *base, 6, 12)), rng.between(-10, 10));
    Neighborhood u = Neighborhood::product_discrete(
        Neighborhood::hm_subbasic(Neighborhood::subset({unit_of(*base)}), 0, 1, Rational(1, 1 << rng.between(1, 5))));
    WitnessCertificate c = certificate_from_witness(f, x, u, duo_witness_z(*f, x, u));
    if (witness_defect(c) > 0) return c;
  }
}

SuiteResult tamper_sweep(std::uint64_t seed, std::size_t count, bool parallel) {
  auto ok = sweep_map<char>(
      count,
      [&](std::size_t i) -> char {
        WitnessCertificate c = random_tamperable_certificate(case_seed(seed, i));
        if (!check_certificate(c).pass) return false;
        WitnessCertificate again = certificate_from_json(parse_json_text(canonical_dump(certificate_to_json(c))));
        if (!check_certificate(again).pass) return false;
        for (Tamper t : {Tamper::Element, Tamper::S1, Tamper::U, Tamper::S2, Tamper::Neighborhood}) {
          auto bad = tamper(c, t);
          if (!bad || check_certificate(*bad).pass) return false;
        }
        return true;
      },
      parallel);
  return tally(ok);
}

}  // namespace duomagma
