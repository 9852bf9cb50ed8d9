#pragma once

#include "inls/field.hpp"

namespace inls {

// Discrete Fourier convention (documented here exactly, used everywhere):
//
//   forward:  fhat(m) = M^{-dim/2} * sum_j f(x_j) exp(-i xi_m . x_j)
//   backward: f(x_j)  = M^{-dim/2} * sum_m fhat(m) exp(+i xi_m . x_j)
//
// with x_j = -L + j h, h = 2L/M, xi_m = (pi/L) m, and m in wraparound
// order per axis. The pair is unitary on the raw coefficient vectors, so
//   sum_j |f(x_j)|^2 = sum_m |fhat(m)|^2
// exactly, and the h^dim-weighted lp_norm agrees between the two spaces.
// The same h^dim weight makes frequency-space sums approximate d(xi)
// integrals with no extra constant: h^dim = (2pi)^{-dim} (2L/M * M *
// pi/L * ... ) works out so that sum_m |xi_m|^{2s} |fhat|^2 h^dim is the
// Riemann sum of the continuum integral (2pi)^{-dim} |Fourier
// transform|^2 d(xi)-normalized consistently with the Gaussian pin
// exp(it*Laplacian) exp(-pi|x|^2) (0) = (1+4 i pi t)^{-dim/2}.
//
// A constant field 1 therefore transforms to a single mode at xi = 0 of
// value M^{dim/2} = (2L)^{dim/2} / h^{dim/2}.

// Forward transform; requires a Physical-space field.
Field to_frequency(const Field& f);
// Backward transform; requires a Frequency-space field.
Field to_physical(const Field& f);

// In-place raw transforms on value arrays (no space tag involved); used by
// the time-stepping hot loops to avoid copies. Both follow the exact
// convention above for the given grid.
void forward_inplace(const Grid& g, std::vector<cplx>& v);
void backward_inplace(const Grid& g, std::vector<cplx>& v);

// Multiplies the Fourier coefficients by |xi|^sigma (0 at xi = 0) and
// returns a physical-space field. Accepts input in either space.
Field fractional_derivative(const Field& f, double sigma);

// Applies a caller-supplied multiplier m(|xi|^2) in frequency space and
// returns a field in the same space as the input.
Field apply_symbol(const Field& f, const std::function<cplx(double)>& m);

}  // namespace inls
