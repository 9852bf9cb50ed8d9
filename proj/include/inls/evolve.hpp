#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "inls/field.hpp"

namespace inls {

// Knobs of the split-step integrator. A zero blowup_norm_cap selects the
// default of 1e6 times the initial H^s norm; a nonzero value must exceed
// the initial norm. step_tol bounds the per-step Richardson error estimate
// when adapt is on; snapshot_interval of zero picks T/256.
struct IntegratorControls {
    double dt = 1e-3;
    bool adapt = true;
    double dt_min = 1e-9;
    long max_steps = 2000000;
    double blowup_norm_cap = 0.0;
    double step_tol = 1e-8;
    double snapshot_interval = 0.0;
};

// Raised when adaptive halving pushes dt below dt_min, which signals
// blow-up or a resolution limit. Carries the trajectory accumulated so
// far, already marked as blowing up, so the rate monitor can run on it.
struct StepCollapse : std::runtime_error {
    Trajectory partial;
    double t_reached;
    StepCollapse(const std::string& what, Trajectory tr, double t)
        : std::runtime_error(what), partial(std::move(tr)), t_reached(t) {}
};

// One Strang step: half-step nonlinear phase, full linear step, half-step
// nonlinear phase. The nonlinear substep multiplies u by
// exp(i mu (dt/2) w |u|^alpha), which is exact for the frozen-modulus flow
// because |u| is pointwise invariant under it. w must be the (real-valued)
// regularized weight sampled on the same grid.
Field strang_step(const Field& u, double dt, const ProblemParams& params,
                  const Field& w);

// Mass ||u||_2^2 and energy 1/2 ||grad u||_2^2 - mu/(alpha+2) int w |u|^{alpha+2}.
std::pair<double, double> conserved(const Field& u, const ProblemParams& params,
                                    const Field& w);

// Integrates u0 to time T, or stops early with the blow-up flag set when
// the H^s norm exceeds the cap. With adapt on, each step is accepted from
// a step-doubling comparison and dt is halved when the error estimate
// exceeds step_tol; halving below dt_min throws StepCollapse. The weight
// uses epsilon = h/2. Parameters outside the classified regimes produce a
// warning on stderr but still run.
Trajectory run(const Field& u0, const ProblemParams& params, double T,
               const IntegratorControls& controls);

// Blow-up rate monitor. Estimates T* by a least-squares line through
// ||u||^{-2/(s-s_c)} vs t over the final resolved decade of norm growth,
// then reports the rate quantity (T*-t)^{(s-s_c)/2} ||u(t)||_{Hdot^s} per
// sample together with its infimum and median over the final resolved
// decade of T*-t. Requires s > s_c (DomainError otherwise) and a
// trajectory flagged as blowing up whose tail actually diverges
// (NotBlowingUp otherwise).
struct BlowupRateReport {
    double T_star = 0.0;
    std::vector<std::pair<double, double>> samples;        // (t, Hdot^s norm)
    std::vector<std::pair<double, double>> rate_quantity;  // (t, scaled norm)
    double infimum = 0.0;
    double median = 0.0;
    std::size_t window_size = 0;  // samples inside the final decade window
};

BlowupRateReport blowup_rate(const Trajectory& traj, const ProblemParams& params);

}  // namespace inls
