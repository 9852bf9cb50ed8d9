#pragma once

#include <optional>
#include <string>
#include <vector>

#include "inls/errors.hpp"
#include "inls/extreal.hpp"

namespace inls {

// Parameters of the weighted Schrodinger problem
//   i u_t + Laplacian u + mu |x|^{-b} |u|^alpha u = 0
// together with the Sobolev regularity index s of the data.
struct ProblemParams {
    int N = 1;          // spatial dimension (1..3 for the numerical modules)
    double s = 0.0;     // regularity index, >= 0
    double b = 0.5;     // weight exponent, > 0
    double alpha = 2.0; // nonlinearity power, > 0
    int mu = 1;         // sign of the nonlinearity, +1 or -1
};

// Whether alpha is an even positive integer (the smoothness hypothesis on
// the nonlinearity), up to the shared equality tolerance.
bool is_even_integer(double alpha);

// Scaling-critical regularity N/2 - (2-b)/alpha.
double critical_index(const ProblemParams& p);

// Largest nonlinearity power compatible with data regularity s:
// (4-2b)/(N-2s) when s < N/2, infinite otherwise.
ExtReal alpha_max(int N, double s, double b);

// Space-time exponent pair (q, r) tied to regularity index s through
// 2/q = N/2 - N/r - s. Construction validates the identity and the
// side conditions; failures throw ExponentMismatch.
struct AdmissiblePair {
    ExtReal q;
    ExtReal r;
    int N;
    double s;
    AdmissiblePair(ExtReal q_, ExtReal r_, int N_, double s_);
};

// True iff 2/q = N/2 - N/r - s (with 2/inf = 0), 2 <= q, r <= inf, and
// (q, r, N) != (2, inf, 2).
bool is_admissible(ExtReal q, ExtReal r, int N, double s);

// Conventions for the working exponent families at index s.
struct AsOptions {
    // Upper r-bound for N = 1, 2, where the admissible range is unbounded.
    // A convention of this implementation, not a derived value.
    double r_cap = 1e6;
    // Window parameters for |s| = 1 (N >= 3 only), 0 < eps0 < eps1 << 1.
    double eps0 = 5e-3;
    double eps1 = 1e-2;
};

// Membership in the exponent family used by the space-time estimates at
// index s. Strict endpoints are realized as intervals shrunk by tol, and
// the pair identity is accepted up to an N*tol residual. |s| = 1 requires
// N >= 3 (DomainError otherwise) and uses the eps0/eps1 windows.
bool in_set_As(ExtReal q, ExtReal r, int N, double s, double tol,
               const AsOptions& opts = AsOptions{});

enum class Regime { SubcriticalWP, CriticalWP, IllPosed, OutOfScope };

std::string regime_name(Regime r);

// Outcome of the hypothesis checklist for a parameter tuple, with every
// condition that was evaluated recorded in reasons.
struct RegimeReport {
    Regime regime = Regime::OutOfScope;
    double s_c = 0.0;
    ExtReal alpha_s;
    std::vector<std::string> reasons;
    // Canonical key=value serialization, keys sorted.
    std::string record() const;
};

// Total classification: the ill-posedness checklist is evaluated first,
// then the well-posedness checklists; anything covered by neither is
// OutOfScope. Boundary tuples satisfying no checklist are OutOfScope.
RegimeReport classify(const ProblemParams& p);

enum class FeasMode { Inhomogeneous, Homogeneous, Critical };

std::string feas_mode_name(FeasMode m);

// Solved exponent system witnessing that the space-time estimates close at
// the given parameters. All identities of the declared mode hold to 1e-12
// when recomputed in exact rational arithmetic.
struct FeasibilityCertificate {
    double rho = 0.0;
    double r1 = 0.0, r2 = 0.0, r3 = 0.0;
    double q3 = 0.0;
    double s_tilde = 0.0;
    double theta_sub = 1.0;  // in (0, 1]
    double eta = 0.0;        // strictness slack actually used
    FeasMode mode = FeasMode::Inhomogeneous;
    std::optional<double> s0;            // Homogeneous mode only
    std::optional<double> eps0, eps1;    // Critical mode at s_c = 1 only
    // True when the rho search window was truncated at the finite-cap
    // convention rather than a derived bound (N = 1, 2 only).
    bool window_capped = false;
    // Canonical key=value serialization, keys sorted.
    std::string record() const;
};

// Searches a 1e4-point grid over the admissible rho window and returns the
// certificate with maximal distance to the window endpoints. Modes with a
// pinned rho (Critical; Homogeneous with alpha < 1) skip the search and
// use the dictated value. Throws InfeasibleSystem, naming the violated
// inequality, when the window is empty or a mode precondition fails.
FeasibilityCertificate strichartz_feasible(const ProblemParams& p, FeasMode mode,
                                           double eta = 1e-3);

// Largest absolute residual over the identities of the certificate's mode,
// recomputed in exact rational arithmetic from the stored values.
double certificate_residual(const ProblemParams& p, const FeasibilityCertificate& c);

}  // namespace inls
