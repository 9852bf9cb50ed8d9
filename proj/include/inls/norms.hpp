#pragma once

#include "inls/extreal.hpp"
#include "inls/field.hpp"

namespace inls {

// Discrete Lebesgue norm (h^dim sum |f|^p)^{1/p}; p = infinity gives the
// plain maximum of |f|, and 0 < p < 1 gives the quasi-norm by the same
// formula (the generalized Leibniz bounds are stated down to p > 0).
// Works in either space; combined with the unitary transform convention
// the p = 2 norm agrees between spaces.
double lp_norm(const Field& f, ExtReal p);

// Sobolev norm of order sigma. Inhomogeneous uses (1 + |xi|^2)^sigma,
// homogeneous |xi|^{2 sigma}, as weights on |fhat|^2 with the h^dim
// frequency-cell measure. Accepts input in either space.
double sobolev_norm(const Field& f, double sigma, bool homogeneous);

// Space-time norm || ||u(t)||_{L^r_x} ||_{L^q_t} over the trajectory's
// snapshot times using the trapezoid rule in t; a single snapshot counts
// with time weight 1 so the value reduces to its spatial norm. q = infinity
// takes the max over snapshots.
double mixed_norm(const Trajectory& tr, ExtReal q, ExtReal r);

// Largest mixed norm over a list of (q, r) exponent pairs; used to probe
// Strichartz-type quantities governed by a family of admissible pairs.
double strichartz_norm(const Trajectory& tr,
                       const std::vector<std::pair<ExtReal, ExtReal>>& pairs);

}  // namespace inls
