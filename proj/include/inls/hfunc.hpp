#pragma once

#include <complex>

namespace inls {

using cplx = std::complex<double>;

// How an H value was produced.
enum class HMethod { Quadrature, Asymptotic, Extension };

const char* h_method_name(HMethod m);

// A value of the oscillatory Beta-type integral together with an error
// bound that is reported, never silently dropped.
struct HValue {
    cplx value;
    double abs_error_estimate;
    HMethod method;
};

// H(y; theta, beta) = integral_0^1 exp(iyr) r^{theta-1} (1-r)^{beta-1} dr.
// Requires theta > 0, beta > 0, y >= 0. Uses a Gauss rule that absorbs
// both endpoint singularities for small and moderate y, and the full
// large-argument expansion (optimally truncated) once its error estimate
// beats the quadrature budget.
HValue h_function(double y, double theta, double beta);

// Same integral continued to beta in (-1, 0): the endpoint divergence is
// removed by subtracting exp(iy) under the integral and adding back the
// continued Beta factor. For beta > 0 this is h_function.
HValue h_function_continued(double y, double theta, double beta);

// Two leading terms of the large-y expansion,
//   Gamma(theta) e^{i pi theta/2} y^{-theta}
//     + Gamma(beta) e^{-i pi beta/2} e^{iy} y^{-beta},
// with an error estimate from the magnitudes of the next term of each
// endpoint series (safety factor included).
HValue h_asymptotic(double y, double theta, double beta);

// Smallest y at which h_function switches to the expansion.
double h_crossover(double theta, double beta);

// Euler Beta with Gamma continuation to negative non-integer arguments.
double beta_continued(double a, double b);

}  // namespace inls
