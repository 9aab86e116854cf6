#include <chrono>
#include <cstdio>

#include "encdec/kernels.hpp"
#include "encdec/linalg.hpp"

using namespace encdec;
using clk = std::chrono::steady_clock;

namespace {

template <typename F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clk::now();
    f();
    const auto t1 = clk::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main() {
  std::printf("%6s %12s %12s %10s %12s\n", "dim", "serial_ms", "omp_ms", "speedup", "max_diff");
  for (int n : {32, 64, 128, 256, 384}) {
    Rng rng(42 + n);
    const CMatrix a = rng.matrix(n, n);
    const CMatrix b = rng.matrix(n, n);
    CMatrix cs(1, 1), co(1, 1);
    const int reps = n <= 128 ? 5 : 3;
    const double ts = best_of(reps, [&] { cs = kernels::matmul_serial(a, b); });
    const double to = best_of(reps, [&] { co = kernels::matmul_omp(a, b); });
    std::printf("%6d %12.3f %12.3f %9.2fx %12.3e\n", n, ts, to, ts / to, frob_dist(cs, co));
  }
  return 0;
}
