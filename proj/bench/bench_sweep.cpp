// Serial vs OpenMP timings for the cross-check kernels.
//   bench_sweep [repeats]

#include "duomagma/sweep.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

using namespace duomagma;

namespace {

double best_of(int repeats, const std::function<SuiteResult()>& run, SuiteResult& out) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    out = run();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, int repeats, const std::function<SuiteResult(bool)>& kernel) {
  SuiteResult serial, parallel;
  double ts = best_of(repeats, [&] { return kernel(false); }, serial);
  double tp = best_of(repeats, [&] { return kernel(true); }, parallel);
  std::printf("%-22s %8zu %10.3f %10.3f %8.2fx  %s\n", name, serial.cases, ts * 1e3, tp * 1e3, ts / tp,
              serial == parallel ? "same" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv) {
  int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("threads %d, best of %d\n", omp_get_max_threads(), repeats);
  std::printf("%-22s %8s %10s %10s %9s  %s\n", "kernel", "cases", "serial ms", "omp ms", "speedup", "results");
  row("membership", repeats, [](bool p) { return membership_crosscheck(1, 4000, p); });
  row("small-combination", repeats, [](bool p) { return small_combination_crosscheck(1, 600, p); });
  row("tamper", repeats, [](bool p) { return tamper_sweep(1, 400, p); });
}
