#include "inls/evolve.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "inls/errors.hpp"
#include "inls/fft.hpp"
#include "inls/field.hpp"
#include "inls/norms.hpp"
#include "inls/propagator.hpp"
#include "inls/weights.hpp"
#include "support/testutil.hpp"

using namespace inls;
using testutil::gaussian_field;
using testutil::lsq_slope;

namespace {

Field zero_weight(const Grid& g) { return Field(g, Space::Physical); }

double max_pointwise_diff(const Field& a, const Field& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    return worst;
}

}  // namespace

TEST_CASE("strang step with zero weight is exact free evolution") {
    Grid g(1, 256, 16.0);
    Field u = gaussian_field(g);
    ProblemParams p{1, 1.0, 0.5, 2.0, -1};
    Field stepped = strang_step(u, 0.05, p, zero_weight(g));
    Field freely = free_evolve(u, 0.05);
    CHECK(max_pointwise_diff(stepped, freely) < 1e-13);
}

TEST_CASE("nonlinear substep preserves the modulus pointwise") {
    Grid g(1, 256, 16.0);
    Field u = gaussian_field(g);
    ProblemParams p{1, 1.0, 0.5, 2.0, 1};
    double dt = 0.04;
    Field w = eval_weight(g, p.b, 0.5 * g.h());

    // Rotate by the half-step phase by hand, then free-evolve: the final
    // half-phase of the full step cannot change any modulus, so the two
    // fields must agree in modulus everywhere.
    Field rotated = u;
    for (std::size_t i = 0; i < rotated.values.size(); ++i) {
        double ph = p.mu * 0.5 * dt * w.values[i].real() *
                    std::pow(std::abs(rotated.values[i]), p.alpha);
        rotated.values[i] *= std::polar(1.0, ph);
    }
    Field via_free = free_evolve(rotated, dt);
    Field stepped = strang_step(u, dt, p, w);
    double worst = 0.0;
    for (std::size_t i = 0; i < stepped.values.size(); ++i)
        worst = std::max(worst, std::abs(std::abs(stepped.values[i]) -
                                         std::abs(via_free.values[i])));
    CHECK(worst < 1e-13);
}

TEST_CASE("strang stepping is second order in dt") {
    Grid g(1, 128, 16.0);
    Field u0 = gaussian_field(g);
    ProblemParams p{1, 1.0, 0.5, 2.0, -1};
    Field w = eval_weight(g, p.b, 0.5 * g.h());
    double T = 0.25;

    auto integrate = [&](int nsteps) {
        Field u = u0;
        double dt = T / nsteps;
        for (int k = 0; k < nsteps; ++k) u = strang_step(u, dt, p, w);
        return u;
    };
    Field ref = integrate(320);
    std::vector<double> log_dt, log_err;
    for (int nsteps : {20, 40, 80}) {
        Field u = integrate(nsteps);
        double err = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i)
            err += std::norm(u.values[i] - ref.values[i]);
        err = std::sqrt(err * g.h());
        log_dt.push_back(std::log(T / nsteps));
        log_err.push_back(std::log(err));
    }
    double slope = lsq_slope(log_dt, log_err);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("conserved quantities at trivial inputs") {
    Grid g(1, 128, 16.0);
    ProblemParams p{1, 1.0, 0.5, 2.0, 1};
    Field w = eval_weight(g, p.b, 0.5 * g.h());

    Field zero(g, Space::Physical);
    auto [m0, e0] = conserved(zero, p, w);
    CHECK(m0 == 0.0);
    CHECK(e0 == 0.0);

    // With zero weight the energy is the pure gradient term, invariant
    // under free evolution.
    Field u = gaussian_field(g);
    auto [mu0, eu0] = conserved(u, p, zero_weight(g));
    Field moved = free_evolve(u, 0.7);
    auto [mu1, eu1] = conserved(moved, p, zero_weight(g));
    CHECK(testutil::rel_diff(mu1, mu0) < 1e-12);
    CHECK(testutil::rel_diff(eu1, eu0) < 1e-12);
    double grad = sobolev_norm(u, 1.0, true);
    CHECK(testutil::rel_diff(eu0, 0.5 * grad * grad) < 1e-12);
}

TEST_CASE("defocusing run conserves mass and energy") {
    Grid g(1, 256, 16.0);
    Field u0 = gaussian_field(g);
    ProblemParams p{1, 1.0, 0.5, 2.0, -1};
    Field w = eval_weight(g, p.b, 0.5 * g.h());
    auto [mass0, energy0] = conserved(u0, p, w);

    IntegratorControls c;
    c.dt = 2.5e-4;
    c.adapt = false;
    double T = 1.0;
    Trajectory tr = run(u0, p, T, c);
    CHECK(tr.times.back() == doctest::Approx(T).epsilon(1e-12));
    CHECK(!tr.blew_up);

    auto [mass1, energy1] = conserved(tr.snapshots.back(), p, w);
    double mass_drift = std::abs(mass1 - mass0) / mass0 / T;
    double energy_drift =
        std::abs(energy1 - energy0) / std::max(1.0, std::abs(energy0)) / T;
    CHECK(mass_drift < 1e-8);
    CHECK(energy_drift < 1e-6);

    // Energy drift is the dt-dependent part of the conservation error and
    // must shrink by at least 3x when dt halves; mass stays at rounding
    // level at both step sizes.
    c.dt = 1.25e-4;
    Trajectory tr2 = run(u0, p, T, c);
    auto [mass2, energy2] = conserved(tr2.snapshots.back(), p, w);
    CHECK(std::abs(mass2 - mass0) / mass0 / T < 1e-8);
    double energy_drift2 =
        std::abs(energy2 - energy0) / std::max(1.0, std::abs(energy0)) / T;
    CHECK(energy_drift2 * 3.0 <= energy_drift);
}

TEST_CASE("stepping backwards undoes the forward run to rounding") {
    Grid g(1, 256, 16.0);
    Field u0 = gaussian_field(g);
    ProblemParams p{1, 1.0, 0.5, 2.0, 1};
    Field w = eval_weight(g, p.b, 0.5 * g.h());
    double dt = 0.01;
    Field u = u0;
    for (int k = 0; k < 20; ++k) u = strang_step(u, dt, p, w);
    for (int k = 0; k < 20; ++k) u = strang_step(u, -dt, p, w);
    CHECK(max_pointwise_diff(u, u0) < 1e-10);
}

TEST_CASE("zero data stays zero and does not blow up") {
    Grid g(1, 128, 16.0);
    ProblemParams p{1, 0.5, 0.5, 2.0, 1};
    IntegratorControls c;
    c.dt = 0.01;
    Trajectory tr = run(Field(g, Space::Physical), p, 0.2, c);
    CHECK(!tr.blew_up);
    for (const Field& f : tr.snapshots)
        for (const cplx& v : f.values) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("focusing supercritical data collapses in finite time") {
    Grid g(2, 128, 8.0);
    Field u0 = gaussian_field(g);
    for (cplx& v : u0.values) v *= 4.0;
    ProblemParams p{2, 1.0, 0.5, 4.0, 1};
    IntegratorControls c;
    c.dt = 2e-3;
    c.dt_min = 1e-5;
    c.step_tol = 1e-6;
    c.blowup_norm_cap = 50.0 * sobolev_norm(u0, p.s, false);
    c.max_steps = 20000;

    bool flagged = false;
    double t_end = 1.0;
    try {
        Trajectory tr = run(u0, p, 1.0, c);
        flagged = tr.blew_up;
        t_end = tr.times.back();
    } catch (const StepCollapse& sc) {
        flagged = sc.partial.blew_up;
        t_end = sc.t_reached;
    }
    CHECK(flagged);
    CHECK(t_end < 1.0);
}

TEST_CASE("rate monitor recovers a synthetic power law") {
    Grid g(1, 128, 16.0);
    ProblemParams p{1, 1.0, 0.3, 6.0, 1};
    double sc = critical_index(p);
    double T_star = 1.0;
    double expo = 0.5 * (p.s - sc);

    Field base = gaussian_field(g);
    double unit = sobolev_norm(base, p.s, true);
    for (cplx& v : base.values) v /= unit;

    Trajectory tr;
    tr.grid = g;
    tr.params = p;
    tr.blew_up = true;
    for (int i = 0; i < 25; ++i) {
        double gap = 0.5 * std::pow(0.75, i);
        Field f = base;
        double amp = std::pow(gap, -expo);
        for (cplx& v : f.values) v *= amp;
        tr.push(T_star - gap, std::move(f));
    }

    BlowupRateReport rep = blowup_rate(tr, p);
    CHECK(std::abs(rep.T_star - T_star) < 0.01);
    for (const auto& [t, q] : rep.rate_quantity) CHECK(std::abs(q - 1.0) < 0.1);
    CHECK(rep.infimum > 0.1 * rep.median);
    CHECK(rep.window_size >= 3);
}

TEST_CASE("rate monitor rejects non-diverging input") {
    Grid g(1, 128, 16.0);
    ProblemParams p{1, 1.0, 0.3, 6.0, 1};
    Field base = gaussian_field(g);

    Trajectory flat;
    flat.grid = g;
    flat.params = p;
    flat.blew_up = true;
    for (int i = 0; i < 10; ++i) flat.push(0.1 * (i + 1), base);
    CHECK_THROWS_AS(blowup_rate(flat, p), NotBlowingUp);

    Trajectory unflagged = flat;
    unflagged.blew_up = false;
    CHECK_THROWS_AS(blowup_rate(unflagged, p), NotBlowingUp);

    ProblemParams shallow{1, 0.1, 0.3, 6.0, 1};  // s below s_c
    CHECK_THROWS_AS(blowup_rate(flat, shallow), DomainError);
}

TEST_CASE("focusing collapse satisfies the rate lower bound") {
    Grid g(1, 2048, 8.0);
    Field u0 = gaussian_field(g);
    for (cplx& v : u0.values) v *= 3.0;
    ProblemParams p{1, 1.0, 0.3, 6.0, 1};
    IntegratorControls c;
    c.dt = 1e-4;
    c.dt_min = 1e-9;
    c.step_tol = 1e-6;
    // Stop while the focusing core is still a few grid cells wide so the
    // approach window feeding the fit stays resolved.
    c.blowup_norm_cap = 15.0 * sobolev_norm(u0, p.s, false);
    c.max_steps = 200000;

    Trajectory tr;
    try {
        tr = run(u0, p, 0.2, c);
    } catch (const StepCollapse& scol) {
        tr = scol.partial;
    }
    REQUIRE(tr.blew_up);

    BlowupRateReport rep = blowup_rate(tr, p);
    CHECK(rep.T_star > tr.times.back());
    CHECK(rep.infimum > 0.0);
    CHECK(rep.infimum > 0.1 * rep.median);
}
