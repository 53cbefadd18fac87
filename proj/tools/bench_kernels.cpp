// Timing comparison of the serial reference kernels against the OpenMP
// entry points, plus a whole-solver sample (one bilinear form evaluation).

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dnp2d/field2d.hpp"
#include "dnp2d/kernels.hpp"

using namespace dnp2d;

namespace {

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <class Fn>
double time_loop(int reps, Fn&& fn) {
  fn();  // warm up
  const double t0 = now();
  for (int i = 0; i < reps; ++i) fn();
  return (now() - t0) / reps;
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-18s serial %10.3f us   parallel %10.3f us   speedup %.2fx\n", name,
              serial_s * 1e6, parallel_s * 1e6, serial_s / parallel_s);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel paths run serially\n");
#endif

  const std::size_t n = 1u << 21;
  std::vector<double> a(n), b(n), out(n);
  std::vector<kern::cplx> z(n / 2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = u(rng);
    b[i] = 1.0 + 0.1 * u(rng);
  }
  for (auto& c : z) c = {u(rng), u(rng)};
  const int reps = 50;

  kern::set_parallel(true);
  report("vmul",
         time_loop(reps, [&] { kern::vmul_serial(a, b, out); }),
         time_loop(reps, [&] { kern::vmul(a, b, out); }));
  report("sum",
         time_loop(reps, [&] { (void)kern::sum_serial(a); }),
         time_loop(reps, [&] { (void)kern::sum(a); }));
  report("dot",
         time_loop(reps, [&] { (void)kern::dot_serial(a, b); }),
         time_loop(reps, [&] { (void)kern::dot(a, b); }));
  report("sum_abs_pow(4/3)",
         time_loop(reps, [&] { (void)kern::sum_abs_pow_serial(a, 4.0 / 3.0); }),
         time_loop(reps, [&] { (void)kern::sum_abs_pow(a, 4.0 / 3.0); }));
  report("max_abs",
         time_loop(reps, [&] { (void)kern::max_abs_serial(a); }),
         time_loop(reps, [&] { (void)kern::max_abs(a); }));
  report("exp_scale",
         time_loop(reps, [&] { kern::exp_scale_serial(std::span<const double>(a).first(z.size()),
                                                      0.1, z); }),
         time_loop(reps, [&] { kern::exp_scale(std::span<const double>(a).first(z.size()), 0.1,
                                               z); }));

  // end-to-end sample: one bilinear-form evaluation at 512^2
  {
    field2d::SpectralWorkspace ws(512, 20.0);
    const auto f = field2d::gaussian_field(512, 20.0, 0.1, 1.0);
    kern::set_parallel(false);
    const double ts = time_loop(10, [&] { (void)ws.bilinear_form(f, f); });
    kern::set_parallel(true);
    const double tp = time_loop(10, [&] { (void)ws.bilinear_form(f, f); });
    report("bilinear_512", ts, tp);
  }
  return 0;
}
