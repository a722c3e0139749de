#pragma once

#include "duomagma/verify.hpp"

#include <cstdint>
#include <exception>
#include <vector>

namespace duomagma {

/// out[i] = fn(i) for i < n. With `parallel` the loop runs under an OpenMP
/// dynamic schedule; results land by index, so both paths return the same
/// vector. The first exception (by index) is rethrown after the loop.
template <typename Result, typename Fn>
std::vector<Result> sweep_map(std::size_t n, Fn&& fn, bool parallel) {
  std::vector<Result> out(n);
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
      try {
        out[i] = fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    for (std::int64_t i = 0; i < count; ++i) {
      try {
        out[i] = fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Per-case seed derived from a suite seed and an index.
std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index);

struct SuiteResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  friend bool operator==(const SuiteResult&, const SuiteResult&) = default;
};

/// hm_nbhd_member against oracle_step_membership on random step functions
/// over C3 and random subbasic sets.
SuiteResult membership_crosscheck(std::uint64_t seed, std::size_t count, bool parallel, bool inject_fault = false);

/// small_combination against oracle_small_combination; a case fails unless
/// both return and both outputs pass the exact post-check.
SuiteResult small_combination_crosscheck(std::uint64_t seed, std::size_t count, bool parallel);

/// Random passing duo certificates over F(C2)/F(C3) with positive defect;
/// a case fails unless the certificate passes, survives a JSON round trip,
/// and every tampering fails.
SuiteResult tamper_sweep(std::uint64_t seed, std::size_t count, bool parallel);

/// A passing certificate over F(C2) or F(C3) whose U-slot has positive
/// defect, drawn deterministically from `seed`.
WitnessCertificate random_tamperable_certificate(std::uint64_t seed);

}  // namespace duomagma
