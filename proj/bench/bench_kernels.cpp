// Wall-clock comparison of each OpenMP kernel against its serial reference.

#include <omp.h>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "phifloor/arith_tables.hpp"
#include "phifloor/aux_sums.hpp"
#include "phifloor/floor_sums.hpp"

using namespace phifloor;

namespace {

// Best of `reps` runs, in seconds. The result is folded into `sink` so the
// call cannot be optimised away.
double best_of(int reps, const std::function<double()>& fn, double& sink) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    sink += fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

struct Kernel {
  std::string name;
  std::function<double()> parallel;
  std::function<double()> serial;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP kernel timings"};
  u64 x = 100'000'000;
  u64 sieve_hi = 20'000'000;
  u64 mobius_n = 200'000;
  int threads = omp_get_max_threads();
  int reps = 3;
  app.add_option("--x", x, "argument for the floor sums");
  app.add_option("--sieve-hi", sieve_hi, "upper end of the sieve range");
  app.add_option("--mobius-n", mobius_n, "N for the Moebius-side sum (x fixed at 10^9)");
  app.add_option("--threads", threads, "OpenMP threads for the parallel side")->check(CLI::PositiveNumber);
  app.add_option("--reps", reps, "repetitions; the best time is reported")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  omp_set_num_threads(threads);

  const AuxSumParams aux{1'000'000'000, mobius_n, 1, true};
  const std::vector<Kernel> kernels{
      {"sieve totient [1, sieve_hi]",
       [&] { return static_cast<double>(sieve_range(FunctionKind::totient, 1, sieve_hi).values.back()); },
       [&] {
         return static_cast<double>(serial::sieve_range_single_block(FunctionKind::totient, 1, sieve_hi).values.back());
       }},
      {"S(x) streaming", [&] { return static_cast<double>(sum_phi_floor(x, SumMethod::streaming)); },
       [&] { return static_cast<double>(serial::sum_phi_floor_streaming(x)); }},
      {"S(x) blocks", [&] { return static_cast<double>(sum_phi_floor(x, SumMethod::blocks)); },
       [&] { return static_cast<double>(serial::sum_phi_floor_blocks(x)); }},
      {"S*(x) streaming", [&] { return sum_phi_over_floor(x, SumMethod::streaming).value(); },
       [&] { return serial::sum_phi_over_floor_streaming(x).value(); }},
      {"Moebius-side aux sum", [&] { return frak_S_star_mobius(aux).value(); },
       [&] { return serial::frak_S_star_mobius(aux).value(); }},
  };

  double sink = 0;
  std::printf("threads=%d reps=%d x=%llu\n", threads, reps, static_cast<unsigned long long>(x));
  std::printf("%-28s %12s %12s %8s\n", "kernel", "serial_s", "parallel_s", "speedup");
  for (const auto& k : kernels) {
    const double ts = best_of(reps, k.serial, sink);
    const double tp = best_of(reps, k.parallel, sink);
    std::printf("%-28s %12.4f %12.4f %8.2f\n", k.name.c_str(), ts, tp, ts / tp);
  }
  std::printf("checksum %.6g\n", sink);
  return 0;
}
