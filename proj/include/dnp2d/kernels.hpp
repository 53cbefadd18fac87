#pragma once

#include <complex>
#include <cstddef>
#include <span>

// Data-parallel primitives shared by the solvers.  Each kernel has a serial
// reference twin (suffix _serial) with identical arithmetic; the unsuffixed
// entry points dispatch to an OpenMP loop when parallel execution is enabled
// and must produce bitwise-identical results.  Reductions accumulate over a
// fixed block decomposition (independent of the thread count), so the sum
// order never changes between serial, parallel, and differently-threaded runs.

namespace dnp2d::kern {

using cplx = std::complex<double>;

bool parallel_enabled() noexcept;
void set_parallel(bool on) noexcept;

// out[i] = a[i] * b[i]
void vmul_serial(std::span<const double> a, std::span<const double> b, std::span<double> out);
void vmul(std::span<const double> a, std::span<const double> b, std::span<double> out);

// z[i] *= m[i]
void scale_serial(std::span<const double> m, std::span<cplx> z);
void scale(std::span<const double> m, std::span<cplx> z);

// out[i] = i * m[i] * in[i]   (multiplication by a purely imaginary symbol)
void scale_i_serial(std::span<const double> m, std::span<const cplx> in, std::span<cplx> out);
void scale_i(std::span<const double> m, std::span<const cplx> in, std::span<cplx> out);

// out[i] += i * m[i] * in[i]
void scale_i_acc_serial(std::span<const double> m, std::span<const cplx> in, std::span<cplx> out);
void scale_i_acc(std::span<const double> m, std::span<const cplx> in, std::span<cplx> out);

// z[i] *= exp(-k2[i] * s)
void exp_scale_serial(std::span<const double> k2, double s, std::span<cplx> z);
void exp_scale(std::span<const double> k2, double s, std::span<cplx> z);

// out[i] = x[i] + c * y[i]
void axpy_serial(std::span<const double> x, double c, std::span<const double> y, std::span<double> out);
void axpy(std::span<const double> x, double c, std::span<const double> y, std::span<double> out);

double sum_serial(std::span<const double> x);
double sum(std::span<const double> x);

// sum of w[i] * x[i]
double dot_serial(std::span<const double> w, std::span<const double> x);
double dot(std::span<const double> w, std::span<const double> x);

// sum of |x[i]|^p (p = 1 and 2 fast-pathed)
double sum_abs_pow_serial(std::span<const double> x, double p);
double sum_abs_pow(std::span<const double> x, double p);

double max_abs_serial(std::span<const double> x);
double max_abs(std::span<const double> x);

}  // namespace dnp2d::kern
