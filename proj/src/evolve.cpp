#include "inls/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "inls/errors.hpp"
#include "inls/fft.hpp"
#include "inls/fit.hpp"
#include "inls/kernels.hpp"
#include "inls/norms.hpp"
#include "inls/weights.hpp"

namespace inls {

namespace {

std::vector<double> real_part(const Field& f) {
    std::vector<double> out(f.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.values[i].real();
    return out;
}

// Split-step workspace: weight and |xi|^2 tables plus the linear-step
// multiplier cached for the last dt.
struct Stepper {
    Grid g;
    std::vector<double> w;
    std::vector<double> fs;
    double mu, alpha;
    std::vector<cplx> mult;
    double mult_dt = std::numeric_limits<double>::quiet_NaN();

    Stepper(const Grid& grid, std::vector<double> weight, double mu_, double alpha_)
        : g(grid), w(std::move(weight)), fs(grid.size()), mu(mu_), alpha(alpha_) {
        for (std::size_t i = 0; i < fs.size(); ++i) fs[i] = g.freq_sq(i);
    }

    void ensure_mult(double dt) {
        if (dt == mult_dt) return;
        mult.resize(fs.size());
        for (std::size_t i = 0; i < fs.size(); ++i)
            mult[i] = std::polar(1.0, -dt * fs[i]);
        mult_dt = dt;
    }

    void step(std::vector<cplx>& v, double dt) {
        kernels::phase_nonlinearity(v, w, alpha, 0.5 * mu * dt);
        forward_inplace(g, v);
        ensure_mult(dt);
        kernels::multiply(v, mult, v);
        backward_inplace(g, v);
        kernels::phase_nonlinearity(v, w, alpha, 0.5 * mu * dt);
    }
};

double l2_of(const Grid& g, const std::vector<cplx>& v) {
    return std::sqrt(kernels::sum_abs_pow(v, 2.0) * std::pow(g.h(), g.dim));
}

}  // namespace

Field strang_step(const Field& u, double dt, const ProblemParams& params,
                  const Field& w) {
    if (u.space != Space::Physical || w.space != Space::Physical)
        throw DomainError("strang_step needs physical-space fields");
    if (w.grid.M != u.grid.M || w.grid.dim != u.grid.dim)
        throw DomainError("strang_step weight grid mismatch");
    Stepper st(u.grid, real_part(w), params.mu, params.alpha);
    Field out = u;
    st.step(out.values, dt);
    return out;
}

std::pair<double, double> conserved(const Field& u, const ProblemParams& params,
                                    const Field& w) {
    const Field& phys = u;
    Field converted;
    const Field* up = &phys;
    if (u.space == Space::Frequency) {
        converted = to_physical(u);
        up = &converted;
    }
    double l2 = lp_norm(*up, ExtReal(2.0));
    double mass = l2 * l2;
    double grad = sobolev_norm(*up, 1.0, true);
    std::vector<double> wr = real_part(w);
    double pot = kernels::weighted_abs_pow(up->values, wr, params.alpha + 2.0) *
                 std::pow(up->grid.h(), up->grid.dim);
    double energy =
        0.5 * grad * grad - params.mu / (params.alpha + 2.0) * pot;
    return {mass, energy};
}

Trajectory run(const Field& u0, const ProblemParams& params, double T,
               const IntegratorControls& controls) {
    if (u0.space != Space::Physical)
        throw DomainError("run needs a physical-space datum");
    if (u0.grid.dim != params.N)
        throw DomainError("run grid dimension disagrees with params.N");
    if (!(T > 0.0)) throw DomainError("run needs T > 0");
    if (!(controls.dt > 0.0)) throw DomainError("controls.dt must be positive");
    if (!(controls.dt_min <= controls.dt))
        throw DomainError("controls.dt_min must not exceed controls.dt");
    if (controls.max_steps <= 0) throw DomainError("controls.max_steps must be positive");

    RegimeReport report = classify(params);
    if (report.regime == Regime::OutOfScope)
        std::fprintf(stderr,
                     "run: parameters classify as OutOfScope; integrating anyway\n");

    const Grid& g = u0.grid;
    Field wfield = eval_weight(g, params.b, 0.5 * g.h());
    Stepper st(g, real_part(wfield), params.mu, params.alpha);

    double hs0 = sobolev_norm(u0, params.s, false);
    double cap = controls.blowup_norm_cap;
    if (cap == 0.0) {
        cap = 1e6 * std::max(hs0, 1e-300);
    } else if (!(cap > hs0)) {
        throw DomainError("blowup_norm_cap must exceed the initial H^s norm");
    }
    double snap_dt =
        controls.snapshot_interval > 0.0 ? controls.snapshot_interval : T / 256.0;
    double step_tol = controls.step_tol > 0.0 ? controls.step_tol : 1e-8;

    Trajectory traj;
    traj.grid = g;
    traj.params = params;
    traj.push(0.0, u0);

    std::vector<cplx> v = u0.values;
    std::vector<cplx> full, half;
    double t = 0.0;
    double dt = controls.dt;
    double last_snap_t = 0.0;
    double last_snap_hs = hs0;
    long steps = 0;

    auto push_state = [&](double tt, double dt_used) {
        Field f(g, Space::Physical);
        f.values = v;
        traj.push(tt, std::move(f), dt_used);
    };

    while (t < T && steps < controls.max_steps) {
        double dt_try = std::min(dt, T - t);
        if (controls.adapt) {
            // Step-doubling: accept the two-half-step state, halve dt when
            // the order-2 Richardson error estimate exceeds the tolerance.
            full = v;
            st.step(full, dt_try);
            half = v;
            st.step(half, 0.5 * dt_try);
            st.step(half, 0.5 * dt_try);
            double scale = std::max(1.0, l2_of(g, half));
            double err = std::sqrt(kernels::diff_sq(full, half)) *
                         std::pow(g.h(), 0.5 * g.dim) / (3.0 * scale);
            if (err > step_tol) {
                dt *= 0.5;
                if (dt < controls.dt_min) {
                    if (traj.times.empty() || t > traj.times.back()) push_state(t, dt);
                    traj.blew_up = true;
                    throw StepCollapse(
                        "step size collapsed below dt_min at t = " + std::to_string(t),
                        traj, t);
                }
                continue;
            }
            v.swap(half);
            if (err < 0.125 * step_tol) dt = std::min(2.0 * dt, controls.dt);
        } else {
            st.step(v, dt_try);
        }
        t += dt_try;
        ++steps;

        Field cur(g, Space::Physical);
        cur.values = v;
        double hs = sobolev_norm(cur, params.s, false);
        if (hs > cap) {
            traj.blew_up = true;
            traj.push(t, std::move(cur), dt_try);
            return traj;
        }
        bool due = (t - last_snap_t >= snap_dt) || (hs >= 1.02 * last_snap_hs) ||
                   !(t < T);
        if (due) {
            traj.push(t, std::move(cur), dt_try);
            last_snap_t = t;
            last_snap_hs = hs;
        }
    }
    if (t < T)
        std::fprintf(stderr, "run: max_steps reached at t = %.6g (target %.6g)\n", t,
                     T);
    return traj;
}

BlowupRateReport blowup_rate(const Trajectory& traj, const ProblemParams& params) {
    double sc = critical_index(params);
    if (!(params.s > sc + 1e-12))
        throw DomainError("blowup_rate requires s > s_c");
    if (!traj.blew_up)
        throw NotBlowingUp("trajectory is not flagged as blowing up");
    if (traj.snapshots.size() < 4)
        throw NotBlowingUp("too few snapshots to fit a divergence");

    BlowupRateReport rep;
    std::size_t n = traj.snapshots.size();
    rep.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double y = sobolev_norm(traj.snapshots[i], params.s, true);
        rep.samples.emplace_back(traj.times[i], y);
    }

    // Fit z = ||u||^{-2/(s-s_c)} linearly in t; the predicted power law
    // makes z proportional to T*-t when the rate is sharp. Observed rates
    // can be steeper, which bends z convex, so the fit is restricted to
    // the final decade of z where any power law is locally near-linear
    // and the zero crossing stays between the last sample and the true
    // blow-up time. The window widens to the full growth tail when it
    // holds fewer than five samples.
    double expo = -2.0 / (params.s - sc);
    double y_end = rep.samples.back().second;
    if (!(y_end > 0.0)) throw NotBlowingUp("final sample has zero norm");
    double z_end = std::pow(y_end, expo);
    std::vector<double> ts, zs;
    for (const auto& [ti, yi] : rep.samples) {
        if (yi > 0.0 && std::pow(yi, expo) <= 10.0 * z_end) {
            ts.push_back(ti);
            zs.push_back(std::pow(yi, expo));
        }
    }
    if (ts.size() < 5) {
        ts.clear();
        zs.clear();
        for (const auto& [ti, yi] : rep.samples) {
            if (yi >= 0.1 * y_end) {
                ts.push_back(ti);
                zs.push_back(std::pow(yi, expo));
            }
        }
    }
    if (ts.size() < 3) throw NotBlowingUp("fewer than 3 samples in the growth tail");
    double slope = fit_slope(ts, zs);
    if (!(slope < 0.0))
        throw NotBlowingUp("tail fit shows no divergence (nonnegative slope)");
    double t_mean = std::accumulate(ts.begin(), ts.end(), 0.0) / ts.size();
    double z_mean = std::accumulate(zs.begin(), zs.end(), 0.0) / zs.size();
    double T_star = t_mean - z_mean / slope;
    double t_end = traj.times.back();
    if (!(T_star > t_end))
        throw NotBlowingUp("fitted blow-up time does not exceed the last sample");
    rep.T_star = T_star;

    rep.rate_quantity.reserve(n);
    for (const auto& [ti, yi] : rep.samples)
        rep.rate_quantity.emplace_back(
            ti, std::pow(T_star - ti, 0.5 * (params.s - sc)) * yi);

    // Final resolved decade: samples with T*-t within ten times the gap at
    // the last sample.
    double gap_end = T_star - t_end;
    std::vector<double> window;
    for (const auto& [ti, qi] : rep.rate_quantity)
        if (T_star - ti <= 10.0 * gap_end) window.push_back(qi);
    if (window.size() < 3)
        throw NotBlowingUp("fewer than 3 samples in the final decade window");
    rep.window_size = window.size();
    rep.infimum = *std::min_element(window.begin(), window.end());
    std::vector<double> sorted = window;
    std::sort(sorted.begin(), sorted.end());
    std::size_t m = sorted.size();
    rep.median = (m % 2 == 1) ? sorted[m / 2]
                              : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    return rep;
}

}  // namespace inls
