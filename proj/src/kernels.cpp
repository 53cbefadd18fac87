#include "dnp2d/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace dnp2d::kern {

namespace {

std::atomic<bool> g_parallel{true};

// Fixed number of reduction slots.  Chosen once so that partial sums combine
// in the same order no matter how many threads execute the slot loop.
constexpr std::size_t kSlots = 256;

template <class SlotFn>
double blocked_reduce_serial(std::size_t n, double init, SlotFn&& slot_fn,
                             double (*combine)(double, double)) {
  if (n == 0) return init;
  const std::size_t per = (n + kSlots - 1) / kSlots;
  double slots[kSlots];
  const std::size_t used = (n + per - 1) / per;
  for (std::size_t s = 0; s < used; ++s) {
    const std::size_t lo = s * per;
    const std::size_t hi = std::min(lo + per, n);
    slots[s] = slot_fn(lo, hi);
  }
  double acc = init;
  for (std::size_t s = 0; s < used; ++s) acc = combine(acc, slots[s]);
  return acc;
}

template <class SlotFn>
double blocked_reduce_parallel(std::size_t n, double init, SlotFn&& slot_fn,
                               double (*combine)(double, double)) {
  if (n == 0) return init;
  const std::size_t per = (n + kSlots - 1) / kSlots;
  double slots[kSlots];
  const std::size_t used = (n + per - 1) / per;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(used); ++s) {
    const std::size_t lo = static_cast<std::size_t>(s) * per;
    const std::size_t hi = std::min(lo + per, n);
    slots[s] = slot_fn(lo, hi);
  }
  double acc = init;
  for (std::size_t s = 0; s < used; ++s) acc = combine(acc, slots[s]);
  return acc;
}

double add(double a, double b) { return a + b; }
double vmax(double a, double b) { return a > b ? a : b; }

}  // namespace

bool parallel_enabled() noexcept { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) noexcept { g_parallel.store(on, std::memory_order_relaxed); }

void vmul_serial(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
}

void vmul(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  if (!parallel_enabled()) return vmul_serial(a, b, out);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i)
    out[i] = a[i] * b[i];
}

void scale_serial(std::span<const double> m, std::span<cplx> z) {
  for (std::size_t i = 0; i < z.size(); ++i) z[i] *= m[i];
}

void scale(std::span<const double> m, std::span<cplx> z) {
  if (!parallel_enabled()) return scale_serial(m, z);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(z.size()); ++i) z[i] *= m[i];
}

void scale_i_serial(std::span<const double> m, std::span<const cplx> in, std::span<cplx> out) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = cplx(-m[i] * in[i].imag(), m[i] * in[i].real());
}

void scale_i(std::span<const double> m, std::span<const cplx> in, std::span<cplx> out) {
  if (!parallel_enabled()) return scale_i_serial(m, in, out);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i)
    out[i] = cplx(-m[i] * in[i].imag(), m[i] * in[i].real());
}

void scale_i_acc_serial(std::span<const double> m, std::span<const cplx> in, std::span<cplx> out) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += cplx(-m[i] * in[i].imag(), m[i] * in[i].real());
}

void scale_i_acc(std::span<const double> m, std::span<const cplx> in, std::span<cplx> out) {
  if (!parallel_enabled()) return scale_i_acc_serial(m, in, out);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i)
    out[i] += cplx(-m[i] * in[i].imag(), m[i] * in[i].real());
}

void exp_scale_serial(std::span<const double> k2, double s, std::span<cplx> z) {
  for (std::size_t i = 0; i < z.size(); ++i) z[i] *= std::exp(-k2[i] * s);
}

void exp_scale(std::span<const double> k2, double s, std::span<cplx> z) {
  if (!parallel_enabled()) return exp_scale_serial(k2, s, z);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(z.size()); ++i)
    z[i] *= std::exp(-k2[i] * s);
}

void axpy_serial(std::span<const double> x, double c, std::span<const double> y,
                 std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + c * y[i];
}

void axpy(std::span<const double> x, double c, std::span<const double> y, std::span<double> out) {
  if (!parallel_enabled()) return axpy_serial(x, c, y, out);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i)
    out[i] = x[i] + c * y[i];
}

double sum_serial(std::span<const double> x) {
  return blocked_reduce_serial(
      x.size(), 0.0,
      [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i];
        return s;
      },
      add);
}

double sum(std::span<const double> x) {
  if (!parallel_enabled()) return sum_serial(x);
  return blocked_reduce_parallel(
      x.size(), 0.0,
      [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i];
        return s;
      },
      add);
}

double dot_serial(std::span<const double> w, std::span<const double> x) {
  return blocked_reduce_serial(
      x.size(), 0.0,
      [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += w[i] * x[i];
        return s;
      },
      add);
}

double dot(std::span<const double> w, std::span<const double> x) {
  if (!parallel_enabled()) return dot_serial(w, x);
  return blocked_reduce_parallel(
      x.size(), 0.0,
      [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += w[i] * x[i];
        return s;
      },
      add);
}

namespace {
template <class Fn>
double abs_pow_slot(std::span<const double> x, std::size_t lo, std::size_t hi, Fn&& f) {
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += f(x[i]);
  return s;
}
}  // namespace

double sum_abs_pow_serial(std::span<const double> x, double p) {
  auto run = [&](auto f) {
    return blocked_reduce_serial(
        x.size(), 0.0,
        [&](std::size_t lo, std::size_t hi) { return abs_pow_slot(x, lo, hi, f); }, add);
  };
  if (p == 1.0) return run([](double v) { return std::abs(v); });
  if (p == 2.0) return run([](double v) { return v * v; });
  return run([p](double v) { return std::pow(std::abs(v), p); });
}

double sum_abs_pow(std::span<const double> x, double p) {
  if (!parallel_enabled()) return sum_abs_pow_serial(x, p);
  auto run = [&](auto f) {
    return blocked_reduce_parallel(
        x.size(), 0.0,
        [&](std::size_t lo, std::size_t hi) { return abs_pow_slot(x, lo, hi, f); }, add);
  };
  if (p == 1.0) return run([](double v) { return std::abs(v); });
  if (p == 2.0) return run([](double v) { return v * v; });
  return run([p](double v) { return std::pow(std::abs(v), p); });
}

double max_abs_serial(std::span<const double> x) {
  return blocked_reduce_serial(
      x.size(), 0.0,
      [&](std::size_t lo, std::size_t hi) {
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(x[i]));
        return m;
      },
      vmax);
}

double max_abs(std::span<const double> x) {
  if (!parallel_enabled()) return max_abs_serial(x);
  return blocked_reduce_parallel(
      x.size(), 0.0,
      [&](std::size_t lo, std::size_t hi) {
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(x[i]));
        return m;
      },
      vmax);
}

}  // namespace dnp2d::kern
