// Timing comparison of the OpenMP kernels against the serial reference
// implementations: batch ray transforms, field derivatives, and the BVP
// solve built on them.
#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mrt/helmholtz.hpp"
#include "mrt/phantom.hpp"
#include "mrt/ray_transform.hpp"
#include "mrt/serial_ref.hpp"

using namespace mrt;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
  // one warmup, then best of reps
  fn();
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, double serial_s, double parallel_s) {
  std::printf("%-28s %10.4f s %10.4f s %8.2fx\n", name, serial_s, parallel_s,
              serial_s / parallel_s);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    const GridDomain g = GridDomain::cube(2, 65);
    MixedField F;
    for (int p = 0; p <= 2; ++p) F.push_back(random_smooth_field(g, p, 7 + static_cast<std::uint64_t>(p), 3, false));
    const auto rays = make_ray_set(g, 2000, 2, 1);
    std::vector<cplx> sink;
    const double ts = time_of([&] { sink = serial::transform_rays(F, rays); }, 3);
    const double tp = time_of([&] { sink = transform_rays(F, rays); }, 3);
    row("ray transform (2000 rays)", ts, tp);
  }

  {
    const GridDomain g = GridDomain::cube(3, 49);
    const TensorField f = random_smooth_field(g, 2, 11, 3, false);
    TensorField sink;
    const double ts = time_of([&] { sink = serial::sym_derivative(f); }, 3);
    const double tp = time_of([&] { sink = sym_derivative(f); }, 3);
    row("sym derivative (49^3, m=2)", ts, tp);
    const double ds = time_of([&] { sink = serial::divergence(f); }, 3);
    const double dp = time_of([&] { sink = divergence(f); }, 3);
    row("divergence (49^3, m=2)", ds, dp);
  }

  {
    const GridDomain g = GridDomain::cube(2, 17);
    const auto rays = make_ray_set(g, 300, 1, 3);
    ImMatrix sink;
    const double tp = time_of([&] { sink = build_Im_matrix(g, 1, rays); }, 3);
    std::printf("%-28s %12s %10.4f s\n", "I^1 matrix (300 rays)", "-", tp);
  }

  {
    // the BVP solve exercises the zero-extension derivative kernels
    const GridDomain g = GridDomain::cube(2, 33);
    const TensorField f = random_smooth_field(g, 2, 13, 3, false);
    DecompositionResult sink;
    const double tp = time_of([&] { sink = helmholtz_trace_free(f, 1e-8); }, 2);
    std::printf("%-28s %12s %10.4f s (%d CG iterations)\n", "helmholtz solve (33^2)", "-", tp,
                sink.cg_iterations);
  }
  return 0;
}
