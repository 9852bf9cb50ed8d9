#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace inls {

using cplx = std::complex<double>;

// Execution policy for the pointwise kernels and reductions. The serial
// path is a plain reference loop kept for testing; the parallel path
// produces identical pointwise results, and reduction results that are
// independent of the thread count (fixed-block partial sums combined in
// index order).
enum class ExecMode { Serial, Parallel };

void set_exec_mode(ExecMode m);
ExecMode exec_mode();

namespace kernels {

// out[i] = a[i] * b[i]
void multiply(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
// v[i] *= m[i]
void multiply_real(std::span<cplx> v, std::span<const double> m);
// acc[i] += w * x[i]
void axpy(std::span<cplx> acc, cplx w, std::span<const cplx> x);
// v[i] *= w
void scale(std::span<cplx> v, cplx w);
// out[i] = |u[i]|^alpha * u[i]
void power_nonlinearity(std::span<const cplx> u, double alpha, std::span<cplx> out);
// u[i] *= exp(i * c * w[i] * |u[i]|^alpha)   (modulus-preserving phase turn)
void phase_nonlinearity(std::span<cplx> u, std::span<const double> w, double alpha,
                        double c);

// sum_i |v[i]|^p
double sum_abs_pow(std::span<const cplx> v, double p);
// max_i |v[i]|
double max_abs(std::span<const cplx> v);
// sum_i w[i] * |v[i]|^p
double weighted_abs_pow(std::span<const cplx> v, std::span<const double> w, double p);
// sum_i |a[i] - b[i]|^2
double diff_sq(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace kernels

}  // namespace inls
