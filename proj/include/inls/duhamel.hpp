#pragma once

#include <array>
#include <vector>

#include "inls/exponents.hpp"
#include "inls/field.hpp"

namespace inls {

// One grid configuration of a refinement ladder.
struct LadderRung {
    double L;    // half length of the box
    int M;       // points per axis
    double eps;  // weight regularization length
};

// Configuration of the first-iterate probe. The single-field entry points
// take the grid from their input field and regularize with
// eps = eps_factor * h; refinement_study uses the explicit ladder.
struct DuhamelConfig {
    ProblemParams params;
    double t_final = 0.5;
    int tau_nodes = 64;
    double eps_factor = 0.5;
    std::vector<LadderRung> ladder;
    double slope_threshold = 0.05;
};

// Throws unless M is strictly increasing and L is non-decreasing along
// the ladder and every regularization length is >= 0.
void validate_ladder(const std::vector<LadderRung>& ladder);

// Default ladder construction. The divergence mechanism dictates the
// refinement direction: in dimension 1 with 1 < b+s < 3/2 the far-field
// carries the growth, so the domain doubles at fixed spacing; otherwise
// the spacing is refined, and the domain also grows (by sqrt(2) per rung)
// whenever b+s >= min{N, N/2+1} so that neither region is presumed.
std::vector<LadderRung> make_ladder(const ProblemParams& p, double L0, int M0,
                                    int n_rungs, double eps_factor);

// First Picard iterate's nonlinear term, with the regularity derivative
// applied:  i mu D^s \int_0^t e^{i(t-tau) Lap} [w_eps |U|^alpha U](tau) dtau,
// U(tau) the free evolution of u0. The tau integral is Gauss-Legendre
// with cfg.tau_nodes nodes.
Field duhamel_term(const Field& u0, const DuhamelConfig& cfg);

// Splitting of duhamel_term into commutator, Lipschitz-difference and
// origin-value parts:
//   I   = i mu \int e^{i(t-tau) Lap} [D^s(w f) - (D^s w) f] dtau
//   II  = i mu \int e^{i(t-tau) Lap} [(D^s w)(f - f(tau,0))] dtau
//   III = i mu \int e^{i(t-tau) Lap} (D^s w) f(tau,0) dtau
// where f = |U|^alpha U. The origin value f(tau,0) is the closed form for
// the unit Gaussian datum, so II and III are meaningful for that datum;
// their sum, and hence the identity I + II + III = duhamel_term, holds
// for any datum.
struct ThreeTerms {
    Field I, II, III;
};
ThreeTerms decompose(const Field& u0, const DuhamelConfig& cfg);

// Splitting of III by the dispersive region of the evolved weight:
// III1 restricts to |x|^2 < tau (evolution time of the slice), III21 is
// the explicit leading-term integral
//   i mu c \int_0^t f(t-tau, 0) tau^{-theta} (|x|^2/(4 tau))^{-beta}
//          e^{i|x|^2/(4 tau)} 1_{|x|^2 > tau} dtau
// with theta = (b+s)/2, beta = (N-b-s)/2 and c collecting the Riesz and
// oscillatory-front constants, and III22 is the remainder
// III - III1 - III21. Throws PoleError at b+s in {N, N+1} and requires
// b+s < N/2 + 2, beyond which the leading-term integral stops converging.
struct ThirdSplit {
    Field III1, III21, III22;
};
ThirdSplit third_term_split(const Field& u0, const DuhamelConfig& cfg);

// Per-rung measurements. Norms are grid L2 norms of the fields above;
// shell_mass is the fraction of the total's squared norm in the bands
// |x|^2/(4 t) in (0, 1/16], (1/16, 1/4], (1/4, 1], (1, 4], (4, 16],
// (16, inf), so the growth locus is recorded rather than assumed.
struct RungRecord {
    double L = 0;
    int M = 0;
    double eps = 0;
    double norm_total = 0;
    double norm_I = 0, norm_II = 0, norm_III = 0;
    double norm_III1 = 0, norm_III21 = 0, norm_III22 = 0;
    std::array<double, 6> shell_mass{};
};

enum class Verdict { Bounded, Diverging, Inconclusive };
const char* verdict_name(Verdict v);

// Diverging demands monotone growth of the total norm across all rungs
// with fitted slope above the threshold and no saturation; Bounded
// demands successive differences shrinking in magnitude (Cauchy-type
// saturation, which takes precedence); anything else is Inconclusive.
struct DivergenceReport {
    std::vector<RungRecord> rungs;
    double fitted_slope = 0.0;    // log total norm vs log M
    double fitted_slope_L = 0.0;  // log total norm vs log L; 0 when L is fixed
    Verdict verdict = Verdict::Inconclusive;
    bool exploratory = false;     // alpha not an even integer
};

// Runs the full pipeline on every rung (Gaussian datum e^{-pi |x|^2}),
// fits the growth slope and emits the verdict. Needs >= 4 rungs. Rungs
// where the third-term split sits on a pole of the evolved-weight
// formula carry NaN in the split norms.
DivergenceReport refinement_study(const DuhamelConfig& cfg);

}  // namespace inls
