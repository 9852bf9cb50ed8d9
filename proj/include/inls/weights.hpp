#pragma once

#include "inls/field.hpp"

namespace inls {

// Samples the regularized weight (|x|^2 + epsilon^2)^{-b/2} on the grid;
// requires 0 <= b < dim. With epsilon = 0 the origin cell takes the average
// of |x|^{-b} over its own cell, which preserves the cell integral that
// Lebesgue bounds see.
Field eval_weight(const Grid& g, double b, double epsilon);

// Average of |x|^{-b} over the centered cell [-h/2, h/2]^dim. The radial
// part is integrated exactly; what remains in dimensions 2 and 3 is a
// smooth angular factor evaluated by Gauss quadrature to machine accuracy.
double origin_cell_average(int dim, double b, double h);

// Constant c in D^s |x|^{-b} = c |x|^{-b-s}, from the Gamma-function
// formula for Fourier transforms of homogeneous functions. Values with
// b+s > dim come from the same formula continued past the identity's
// direct range and are flagged.
struct RieszConstant {
    int N;
    double b, s;
    cplx value;
    bool beyond_direct;  // b+s >= N: continued value, not directly testable
};

RieszConstant riesz_constant(int N, double b, double s);

// Numerical authority for riesz_constant: applies the fractional
// derivative to the sampled weight, divides by |x|^{-b-s} on the annulus
// r_in <= |x| <= r_out and returns the largest relative deviation of the
// quotient from the formula value.
double verify_hormander(const Grid& g, double b, double s, double r_in, double r_out);

}  // namespace inls
