#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace inls {

// Nodes and weights of a quadrature rule; sum w_i f(x_i) approximates the
// integral the rule was built for.
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1] (weight 1), n nodes.
QuadRule gauss_legendre(int n);

// Gauss-Legendre rule mapped to [a, b].
QuadRule gauss_legendre_ab(int n, double a, double b);

// Gauss-Jacobi rule on [0, 1] absorbing the weight r^p (1-r)^q, p, q > -1:
//   integral_0^1 f(r) r^p (1-r)^q dr  ~=  sum w_i f(r_i).
// Built by the Golub-Welsch eigenvalue method from the monic Jacobi
// recurrence, so it is stable for every admissible (p, q).
QuadRule gauss_jacobi01(int n, double p, double q);

// Adaptive Gauss-Kronrod 7/15 integration of a complex-valued function.
// Bisects until the local Kronrod-Gauss discrepancy meets the tolerance
// budget (distributed proportionally to subinterval length); abs_error
// returns the accumulated discrepancy of the accepted panels.
std::complex<double> integrate_gk(const std::function<std::complex<double>(double)>& f,
                                  double a, double b, double tol,
                                  double* abs_error = nullptr, int max_depth = 40);

}  // namespace inls
