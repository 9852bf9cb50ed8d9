#pragma once

#include "inls/exponents.hpp"
#include "inls/field.hpp"
#include "inls/hfunc.hpp"

namespace inls {

// Applies the free Schroedinger group: multiplies the Fourier transform by
// exp(-i t |xi|^2), the sign convention that solves i u_t + Lap u = 0.
// Requires a physical-space field; returns one.
Field free_evolve(const Field& f, double t);

// Value of |u|^alpha u at the origin for u(t) the free evolution of
// exp(-pi |x|^2):  1 / (|1+4 i pi t|^{N alpha / 2} (1+4 i pi t)^{N/2}).
cplx gaussian_nonlinearity_at_origin(double t, int N, double alpha);

// Free evolution of the homogeneous weight |x|^{-lambda} at radius x_abs,
// via the Beta-type integral:
//   0 < lambda < N:          (4it)^{-lambda/2} Gamma(lambda/2)^{-1} H(y)
//   max{N,2} < lambda < N+2: the analytic extension through the divergent
//                            endpoint, combining H values at shifted
//                            exponents
//   N = 1, 1 < lambda < 2:   the continued H directly
// with y = |x|^2/(4t), theta = lambda/2, beta = (N-lambda)/2. Throws
// PoleError at lambda in {N, N+1} and DomainError outside (0, N+2).
// alt_arg switches the extension branch to the rescaled argument
// y = |x|^2/t; the grid oracle in the tests rejects it, and it stays
// available so that the check remains expressible.
cplx weight_evolution(double t, double x_abs, double lambda, int N,
                      bool alt_arg = false);

// Mixed-norm of the sampled free evolution over [0, T] at n_times equally
// spaced snapshots, divided by the homogeneous Sobolev norm of the datum
// at the pair's declared regularity.
double strichartz_ratio(const Field& u0, const AdmissiblePair& pair, double T,
                        int n_times);

}  // namespace inls
