#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include <omp.h>

#include "inls/fft.hpp"
#include "inls/kernels.hpp"
#include "inls/norms.hpp"
#include "inls/serialize.hpp"

using namespace inls;

namespace {

Field random_field(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field f(g, Space::Physical);
    for (auto& z : f.values) z = cplx(u(rng), u(rng));
    return f;
}

Field gaussian(const Grid& g, double width = 1.0) {
    return sample_physical(g, [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
        return cplx(std::exp(-M_PI * width * width * r2), 0.0);
    });
}

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace

TEST_CASE("constant field transforms to a single zero mode") {
    for (int dim : {1, 2}) {
        Grid g(dim, 64, 8.0);
        Field f(g, Space::Physical);
        for (auto& z : f.values) z = cplx(1.0, 0.0);
        Field hat = to_frequency(f);
        CHECK(hat.space == Space::Frequency);
        double expect = std::pow(2.0 * g.L, dim / 2.0) / std::pow(g.h(), dim / 2.0);
        CHECK(std::abs(hat.values[0] - cplx(expect)) < 1e-10 * expect);
        double off = 0.0;
        for (std::size_t i = 1; i < hat.values.size(); ++i)
            off = std::max(off, std::abs(hat.values[i]));
        CHECK(off < 1e-10 * expect);
    }
}

TEST_CASE("on-lattice plane wave concentrates on its own mode") {
    Grid g(1, 128, 4.0);
    int k0 = 5;  // axis index of the target mode
    Field f = sample_physical(g, [&](const std::array<double, 3>& x) {
        double xi = g.freq(k0);
        return std::exp(cplx(0.0, xi * x[0]));
    });
    Field hat = to_frequency(f);
    double expect = std::pow(static_cast<double>(g.M), 0.5);
    CHECK(std::abs(hat.values[k0] - cplx(expect)) < 1e-9 * expect);
    for (int k = 0; k < g.M; ++k) {
        if (k == k0) continue;
        CHECK(std::abs(hat.values[k]) < 1e-9 * expect);
    }
}

TEST_CASE("transform round trip and Parseval identity") {
    for (int dim : {1, 2, 3}) {
        Grid g(dim, dim == 3 ? 16 : 64, 6.0);
        Field f = random_field(g, 1000u + dim);
        Field hat = to_frequency(f);
        Field back = to_physical(hat);
        double n2 = lp_norm(f, ExtReal(2.0));
        double rt = std::sqrt(kernels::diff_sq(back.values, f.values)) *
                    std::pow(g.h(), g.dim / 2.0);
        CHECK(rt < 1e-12 * n2);
        CHECK(rel_diff(lp_norm(hat, ExtReal(2.0)), n2) < 1e-12);
    }
    // Space tags are enforced.
    Grid g(1, 32, 1.0);
    Field f(g, Space::Physical);
    CHECK_THROWS_AS((void)to_physical(f), DomainError);
    CHECK_THROWS_AS((void)to_frequency(to_frequency(f)), DomainError);
}

TEST_CASE("fractional derivative composes and is the identity at order zero") {
    Grid g(1, 256, 8.0);
    // Band-limited input: random coefficients on |mode| < M/8 only.
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field hat(g, Space::Frequency);
    for (int k = 0; k < g.M; ++k)
        if (std::abs(g.mode(k)) < g.M / 8) hat.values[k] = cplx(u(rng), u(rng));
    Field f = to_physical(hat);

    Field once = fractional_derivative(fractional_derivative(f, 0.4), 0.85);
    Field both = fractional_derivative(f, 1.25);
    double den = std::sqrt(kernels::sum_abs_pow(both.values, 2.0));
    double num = std::sqrt(kernels::diff_sq(once.values, both.values));
    CHECK(num / den < 1e-10);

    Field ident = fractional_derivative(f, 0.0);
    CHECK(ident.space == Space::Physical);
    double base = std::sqrt(kernels::sum_abs_pow(f.values, 2.0));
    CHECK(std::sqrt(kernels::diff_sq(ident.values, f.values)) / base < 1e-12);
}

TEST_CASE("symbol application is linear and preserves real even fields") {
    Grid g(2, 64, 8.0);
    Field a = random_field(g, 5);
    Field b = random_field(g, 6);
    auto m = [](double fs) { return cplx(1.0 / (1.0 + fs), 0.5 * std::sin(fs)); };

    Field sum(g, Space::Physical);
    for (std::size_t i = 0; i < sum.values.size(); ++i)
        sum.values[i] = a.values[i] + 2.0 * b.values[i];
    Field lhs = apply_symbol(sum, m);
    Field ma = apply_symbol(a, m);
    Field mb = apply_symbol(b, m);
    Field rhs(g, Space::Physical);
    for (std::size_t i = 0; i < rhs.values.size(); ++i)
        rhs.values[i] = ma.values[i] + 2.0 * mb.values[i];
    double den = std::sqrt(kernels::sum_abs_pow(lhs.values, 2.0));
    CHECK(std::sqrt(kernels::diff_sq(lhs.values, rhs.values)) / den < 1e-12);

    // Real symbol acting on a real even field keeps it real (and even).
    Field ge = gaussian(g);
    Field out = apply_symbol(ge, [](double fs) { return cplx(std::exp(-fs), 0.0); });
    CHECK(out.space == Space::Physical);
    double imax = 0.0, omax = 0.0;
    for (const auto& z : out.values) {
        imax = std::max(imax, std::abs(z.imag()));
        omax = std::max(omax, std::abs(z));
    }
    CHECK(imax < 1e-12 * omax);

    // Frequency-space input stays in frequency space.
    Field hat = to_frequency(ge);
    Field hot = apply_symbol(hat, m);
    CHECK(hot.space == Space::Frequency);
}

TEST_CASE("Lebesgue norm examples") {
    Grid g(1, 64, 8.0);
    // Indicator of one cell: (h * 1)^{1/p}.
    Field ind(g, Space::Physical);
    ind.values[10] = cplx(1.0, 0.0);
    for (double p : {1.0, 2.0, 3.5})
        CHECK(rel_diff(lp_norm(ind, ExtReal(p)), std::pow(g.h(), 1.0 / p)) < 1e-13);
    CHECK(lp_norm(ind, ExtReal::infinity()) == 1.0);

    // Gaussian mass: || exp(-pi |x|^2) ||_2 = 2^{-dim/4}.
    for (int dim : {1, 2}) {
        Grid gd(dim, 128, 8.0);
        CHECK(rel_diff(lp_norm(gaussian(gd), ExtReal(2.0)), std::pow(2.0, -dim / 4.0)) <
              1e-8);
    }

    // Quasi-norm range follows the same closed form; only p <= 0 is out.
    CHECK(rel_diff(lp_norm(ind, ExtReal(0.5)), std::pow(g.h(), 2.0)) < 1e-13);
    CHECK_THROWS_AS((void)lp_norm(ind, ExtReal(0.0)), DomainError);
}

TEST_CASE("Sobolev norm examples and monotonicity") {
    Grid g(1, 256, 8.0);
    Field f = gaussian(g);

    // Order zero inhomogeneous is the Lebesgue 2 norm.
    CHECK(rel_diff(sobolev_norm(f, 0.0, false), lp_norm(f, ExtReal(2.0))) < 1e-12);
    CHECK(rel_diff(sobolev_norm(f, 0.0, true), lp_norm(f, ExtReal(2.0))) < 1e-12);

    // A pure mode scales by the expected multiplier value.
    int k0 = 9;
    Field wave = sample_physical(g, [&](const std::array<double, 3>& x) {
        return std::exp(cplx(0.0, g.freq(k0) * x[0]));
    });
    double xi = g.freq(k0);
    double l2 = lp_norm(wave, ExtReal(2.0));
    CHECK(rel_diff(sobolev_norm(wave, 0.7, true), std::pow(xi, 0.7) * l2) < 1e-10);
    CHECK(rel_diff(sobolev_norm(wave, 0.7, false),
                   std::pow(1.0 + xi * xi, 0.35) * l2) < 1e-10);

    // Inhomogeneous order is monotone.
    Field r = random_field(g, 17);
    double prev = 0.0;
    for (double s : {0.0, 0.25, 0.5, 1.0, 1.5}) {
        double v = sobolev_norm(r, s, false);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("critical Sobolev norm is invariant under the intrinsic scaling") {
    // Parameters with fractional critical index: dim 1, b = 0.3, alpha = 6
    // give s_c = 1/2 - (2 - b)/alpha = 0.2166...; the rescaled profile
    // lambda^{(2-b)/alpha} u(lambda x) must keep the same critical norm.
    double b = 0.3, alpha = 6.0;
    double sc = 0.5 - (2.0 - b) / alpha;
    Grid g(1, 1024, 16.0);
    auto scaled = [&](double lam) {
        return sample_physical(g, [&](const std::array<double, 3>& x) {
            double y = lam * x[0];
            return cplx(std::pow(lam, (2.0 - b) / alpha) * std::exp(-M_PI * y * y), 0.0);
        });
    };
    double ref = sobolev_norm(scaled(1.0), sc, true);
    for (double lam : {0.5, 2.0})
        CHECK(rel_diff(sobolev_norm(scaled(lam), sc, true), ref) < 0.01);
    // A non-critical order must break the invariance, so the check above
    // is not vacuous.
    double off = sobolev_norm(scaled(2.0), sc + 0.5, true);
    CHECK(rel_diff(off, sobolev_norm(scaled(1.0), sc + 0.5, true)) > 0.05);
}

TEST_CASE("mixed norms over trajectories") {
    Grid g(1, 64, 8.0);
    Field f = gaussian(g);
    double fr = lp_norm(f, ExtReal(4.0));

    Trajectory single{g, {}, {}, {}};
    single.push(0.0, f);
    CHECK(rel_diff(mixed_norm(single, ExtReal(6.0), ExtReal(4.0)), fr) < 1e-13);

    // Constant-in-time field over [0, 1]: trapezoid weights sum to 1.
    Trajectory tr{g, {}, {}, {}};
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) tr.push(t, f);
    CHECK(rel_diff(mixed_norm(tr, ExtReal(6.0), ExtReal(4.0)), fr) < 1e-13);
    CHECK(rel_diff(mixed_norm(tr, ExtReal::infinity(), ExtReal(4.0)), fr) < 1e-13);

    CHECK(rel_diff(strichartz_norm(tr, {{ExtReal(6.0), ExtReal(4.0)},
                                        {ExtReal::infinity(), ExtReal(2.0)}}),
                   std::max(fr, lp_norm(f, ExtReal(2.0)))) < 1e-13);

    Trajectory bad{g, {}, {}, {}};
    bad.push(0.0, f);
    CHECK_THROWS_AS(bad.push(0.0, f), DomainError);
}

TEST_CASE("free Gaussian mixed norm is invariant under parabolic rescaling") {
    // exp(it Laplacian) applied to exp(-pi x^2) in closed form; the pair
    // (q, r) = (8, 4) satisfies 2/q = 1/2 - 1/r, so the rescaled solution
    // lambda^{1/2} u(lambda^2 t, lambda x) carries the same mixed norm.
    Grid g(1, 512, 16.0);
    auto snapshot = [&](double t, double lam) {
        return sample_physical(g, [&](const std::array<double, 3>& x) {
            cplx denom(1.0, 4.0 * M_PI * lam * lam * t);
            cplx amp = std::pow(lam, 0.5) * std::pow(denom, -0.5);
            double y = lam * x[0];
            return amp * std::exp(-M_PI * y * y / denom);
        });
    };
    auto traj = [&](double lam) {
        Trajectory tr{g, {}, {}, {}};
        for (int k = 0; k <= 8; ++k) tr.push(0.1 * k / (lam * lam), snapshot(0.1 * k / (lam * lam), lam));
        return tr;
    };
    double ref = mixed_norm(traj(1.0), ExtReal(8.0), ExtReal(4.0));
    for (double lam : {0.5, 2.0})
        CHECK(rel_diff(mixed_norm(traj(lam), ExtReal(8.0), ExtReal(4.0)), ref) < 0.02);
}

TEST_CASE("field container round trips exactly") {
    Grid g(2, 32, 4.0);
    Field f = random_field(g, 321);
    f.space = Space::Frequency;
    std::stringstream buf;
    write_field(buf, f);
    Field back = read_field(buf);
    CHECK(back.grid == g);
    CHECK(back.space == Space::Frequency);
    REQUIRE(back.values.size() == f.values.size());
    bool same = true;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        same = same && back.values[i] == f.values[i];
    CHECK(same);

    std::stringstream junk("NOTAFLD1xxxxxxxxxxxxxxxx");
    CHECK_THROWS_AS((void)read_field(junk), DomainError);
    std::stringstream trunc;
    trunc.write("INLSFLD1", 8);
    CHECK_THROWS_AS((void)read_field(trunc), DomainError);
}

TEST_CASE("serial and parallel kernels agree") {
    Grid g(1, 4096, 8.0);
    Field a = random_field(g, 40);
    Field b = random_field(g, 41);
    std::vector<double> w(a.values.size());
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (auto& x : w) x = u(rng);

    auto run_all = [&]() {
        struct Out {
            std::vector<cplx> prod, pow, phase;
            double sum, wsum, mx, dsq;
        } o;
        o.prod.resize(a.values.size());
        o.pow.resize(a.values.size());
        kernels::multiply(a.values, b.values, o.prod);
        kernels::power_nonlinearity(a.values, 1.3, o.pow);
        o.phase = a.values;
        kernels::phase_nonlinearity(o.phase, w, 2.0, -0.37);
        o.sum = kernels::sum_abs_pow(a.values, 3.2);
        o.wsum = kernels::weighted_abs_pow(a.values, w, 2.0);
        o.mx = kernels::max_abs(a.values);
        o.dsq = kernels::diff_sq(a.values, b.values);
        return o;
    };

    set_exec_mode(ExecMode::Serial);
    auto ser = run_all();
    set_exec_mode(ExecMode::Parallel);
    auto par = run_all();

    // Pointwise kernels are bitwise identical across modes.
    CHECK(ser.prod == par.prod);
    CHECK(ser.pow == par.pow);
    CHECK(ser.phase == par.phase);
    // Fixed-block reductions are bitwise identical too.
    CHECK(ser.sum == par.sum);
    CHECK(ser.wsum == par.wsum);
    CHECK(ser.mx == par.mx);
    CHECK(ser.dsq == par.dsq);

    // And independent of the thread count.
    int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    auto one = run_all();
    omp_set_num_threads(saved > 1 ? saved : 4);
    auto many = run_all();
    CHECK(one.sum == many.sum);
    CHECK(one.wsum == many.wsum);
    CHECK(one.dsq == many.dsq);
    omp_set_num_threads(saved);
}
