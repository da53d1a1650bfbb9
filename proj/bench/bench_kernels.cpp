// Wall-clock comparison of the serial reference kernels against the OpenMP
// paths: the per-atom constraint reduction and the zero-one risk field.

#include <chrono>
#include <cstdio>
#include <vector>

#include "ermfdr/kernels.hpp"
#include "ermfdr/rng.hpp"
#include "ermfdr/solver.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace ermfdr;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <class F>
double time_best_of(int reps, F&& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_seconds();
    body();
    best = std::min(best, now_seconds() - t0);
  }
  return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  std::printf("\nconstraint reduction, entropy generator, 64 evaluations\n");
  std::printf("%10s %12s %12s %8s\n", "atoms", "serial (s)", "parallel (s)",
              "speedup");
  const DivergenceSpec spec = make_divergence(Divergence::kl);
  for (std::size_t n : {std::size_t{10000}, std::size_t{100000},
                        std::size_t{1000000}}) {
    Rng rng(17);
    std::vector<double> risks(n), weights(n, 1.0 / static_cast<double>(n));
    for (double& r : risks) r = rng.uniform(0.0, 4.0);

    volatile double sink = 0.0;
    auto sweep = [&](ExecPolicy policy) {
      kernels::DomainStatus status;
      double acc = 0.0;
      for (int k = 0; k < 64; ++k) {
        acc += kernels::density_sum(spec, 1.0, -0.5 + 0.02 * k, risks, weights,
                                    policy, &status);
      }
      sink = acc;
    };
    const double serial = time_best_of(3, [&] { sweep(ExecPolicy::serial); });
    const double parallel = time_best_of(3, [&] { sweep(ExecPolicy::parallel); });
    std::printf("%10zu %12.4f %12.4f %7.2fx\n", n, serial, parallel,
                serial / parallel);
  }

  std::printf("\nzero-one risk field, 2000 samples\n");
  std::printf("%10s %12s %12s %8s\n", "atoms", "serial (s)", "parallel (s)",
              "speedup");
  for (int res : {101, 201, 401}) {
    Rng rng(29);
    const int samples = 2000;
    std::vector<double> xs(samples), ys(samples);
    std::vector<int> labels(samples);
    for (int i = 0; i < samples; ++i) {
      xs[i] = rng.normal();
      ys[i] = rng.normal();
      labels[i] = (rng.bits() & 1) ? 1 : -1;
    }
    std::vector<double> out;
    const double serial = time_best_of(3, [&] {
      out = kernels::zero_one_risk_field(xs, ys, labels, -50.0, 50.0, res,
                                         ExecPolicy::serial);
    });
    const double parallel = time_best_of(3, [&] {
      out = kernels::zero_one_risk_field(xs, ys, labels, -50.0, 50.0, res,
                                         ExecPolicy::parallel);
    });
    std::printf("%10d %12.4f %12.4f %7.2fx\n", res * res, serial, parallel,
                serial / parallel);
  }
  return 0;
}
