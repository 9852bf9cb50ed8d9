#include "doctest.h"

#include <cmath>
#include <vector>

#include "support/testutil.hpp"

#include "inls/fft.hpp"
#include "inls/kernels.hpp"
#include "inls/norms.hpp"
#include "inls/propagator.hpp"
#include "inls/weights.hpp"

using namespace inls;
using testutil::free_gaussian_exact;
using testutil::gaussian_field;
using testutil::lsq_slope;
using testutil::rel_diff;

namespace {

double l2_rel_err(const Field& a, const Field& b) {
    double num = std::sqrt(kernels::diff_sq(a.values, b.values));
    double den = std::sqrt(kernels::sum_abs_pow(b.values, 2.0));
    return num / den;
}

}  // namespace

TEST_CASE("free evolution is a unitary group") {
    Grid g(1, 512, 16.0);
    Field f = gaussian_field(g, 1.3);
    CHECK(l2_rel_err(free_evolve(f, 0.0), f) < 1e-12);

    Field u = free_evolve(f, 0.37);
    CHECK(rel_diff(lp_norm(u, ExtReal(2.0)), lp_norm(f, ExtReal(2.0))) < 1e-12);

    Field two_steps = free_evolve(free_evolve(f, 0.21), 0.16);
    Field one_step = free_evolve(f, 0.37);
    CHECK(l2_rel_err(two_steps, one_step) < 1e-12);
}

TEST_CASE("free Gaussian matches the closed form") {
    for (int dim : {1, 2}) {
        Grid g(dim, dim == 1 ? 1024 : 512, 16.0);
        Field u0 = gaussian_field(g);
        for (double t : {0.1, 0.5, 1.0}) {
            Field u = free_evolve(u0, t);
            // Value at the origin pins amplitude, phase and convention.
            std::array<int, 3> c{g.M / 2, g.M / 2, 0};
            cplx at0 = u.values[g.flatten(c)];
            cplx expect = std::pow(cplx(1.0, 4.0 * M_PI * t), -0.5 * dim);
            CHECK(std::abs(at0 - expect) < 1e-8 * std::abs(expect));
            // Whole field against the analytic solution, while the spread
            // Gaussian still fits the box; at t = 1 the tails wrap and the
            // mismatch is set by periodization, not by the method.
            if (t <= 0.5) CHECK(l2_rel_err(u, free_gaussian_exact(g, t)) < 1e-8);
        }
    }
}

TEST_CASE("Gaussian nonlinearity value at the origin") {
    CHECK(gaussian_nonlinearity_at_origin(0.0, 2, 3.0) == cplx(1.0, 0.0));

    for (double t : {0.2, 0.7}) {
        for (int N : {1, 2, 3}) {
            double alpha = 1.5;
            cplx f = gaussian_nonlinearity_at_origin(t, N, alpha);
            double mod = std::pow(1.0 + 16.0 * M_PI * M_PI * t * t,
                                  -N * (alpha + 1.0) / 4.0);
            CHECK(rel_diff(std::abs(f), mod) < 1e-12);
        }
    }

    // Grid cross-check: |u(t,0)|^alpha u(t,0) for the evolved Gaussian.
    Grid g(1, 1024, 16.0);
    Field u = free_evolve(gaussian_field(g), 0.4);
    cplx at0 = u.values[g.M / 2];
    cplx grid_val = std::pow(std::abs(at0), 2.5) * at0;
    cplx closed = gaussian_nonlinearity_at_origin(0.4, 1, 2.5);
    CHECK(std::abs(grid_val - closed) < 1e-6 * std::abs(closed));
}

TEST_CASE("weight evolution argument checks") {
    CHECK_THROWS_AS((void)weight_evolution(0.0, 1.0, 0.5, 1), DomainError);
    CHECK_THROWS_AS((void)weight_evolution(0.5, 1.0, 0.0, 1), DomainError);
    CHECK_THROWS_AS((void)weight_evolution(0.5, 1.0, 3.0, 1), DomainError);
    CHECK_THROWS_AS((void)weight_evolution(0.5, 1.0, 4.2, 2), DomainError);
    CHECK_NOTHROW((void)weight_evolution(0.5, 1.0, 3.7, 2));
    CHECK_THROWS_AS((void)weight_evolution(0.5, 1.0, 1.0, 1), PoleError);
    CHECK_THROWS_AS((void)weight_evolution(0.5, 1.0, 2.0, 1), PoleError);
    CHECK_THROWS_AS((void)weight_evolution(0.5, 1.0, 2.0, 2), PoleError);
    CHECK_THROWS_AS((void)weight_evolution(0.5, 1.0, 3.0, 2), PoleError);
}

// Grid oracle for the evolved weight: evolve the regularized weight and
// subtract the point-mass correction carried by the regularization,
//   exp(itLap)(|x|^2+eps^2)^{-lam/2}
//     ~= exp(itLap)|x|^{-lam} + kappa eps^{1-lam} (4 pi i t)^{-1/2} e^{i|x|^2/(4t)}
// in dimension 1, where kappa = sqrt(pi) Gamma((lam-1)/2) / Gamma(lam/2) is
// the integral of (1+u^2)^{-lam/2} - |u|^{-lam} (continued below lam = 1).
TEST_CASE("weight evolution certified by the grid on an annulus") {
    Grid g(1, 1 << 16, 256.0);
    double t = 0.5, eps = 2.0 * g.h();
    for (double lam : {0.7, 1.5, 2.5}) {
        Field w(g, Space::Physical);
        for (std::size_t i = 0; i < w.values.size(); ++i)
            w.values[i] = std::pow(g.coord_sq(i) + eps * eps, -0.5 * lam);
        Field u = free_evolve(w, t);
        double kappa =
            std::sqrt(M_PI) * std::tgamma(0.5 * (lam - 1.0)) / std::tgamma(0.5 * lam);
        cplx spread = std::pow(4.0 * M_PI * cplx(0.0, t), -0.5);
        double worst = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            double r2 = g.coord_sq(i);
            if (r2 < 1.0 || r2 > 4.0) continue;
            cplx predict = weight_evolution(t, std::sqrt(r2), lam, 1) +
                           kappa * std::pow(eps, 1.0 - lam) * spread *
                               std::exp(cplx(0.0, r2 / (4.0 * t)));
            worst = std::max(worst,
                             std::abs(u.values[i] - predict) / std::abs(predict));
        }
        // The oracle keeps only the zeroth moment of the regularization
        // difference; its own floor is the second-moment term, which is
        // amplified at lam = 2.5 where the eps^{1-lam} correction dominates
        // the weight itself. A wrong branch or argument shows as O(1).
        CHECK(worst < (lam > 2.0 ? 2e-3 : 1e-3));

        // The alternative argument convention in the extension branch is
        // refuted by the same oracle.
        if (lam > 2.0) {
            double worst_alt = 0.0;
            for (std::size_t i = 0; i < u.values.size(); ++i) {
                double r2 = g.coord_sq(i);
                if (r2 < 1.0 || r2 > 4.0) continue;
                cplx predict = weight_evolution(t, std::sqrt(r2), lam, 1, true) +
                               kappa * std::pow(eps, 1.0 - lam) * spread *
                                   std::exp(cplx(0.0, r2 / (4.0 * t)));
                worst_alt = std::max(
                    worst_alt, std::abs(u.values[i] - predict) / std::abs(predict));
            }
            CHECK(worst_alt > 10.0 * worst);
        }
    }
}

TEST_CASE("evolved weight modulus decays with the predicted power") {
    // For lam > dim/2 the envelope at fixed t decays like y^{-beta} in
    // y = |x|^2/(4t), i.e. like |x|^{-2 beta} in radius.
    int N = 2;
    double lam = 1.3, t = 0.25;
    double beta = 0.5 * (N - lam);
    std::vector<double> lx, lv;
    for (int k = 0; k < 40; ++k) {
        double y = 100.0 * std::pow(50.0, k / 39.0);
        double x = std::sqrt(4.0 * t * y);
        lx.push_back(std::log(y));
        lv.push_back(std::log(std::abs(weight_evolution(t, x, lam, N))));
    }
    double slope = lsq_slope(lx, lv);
    CHECK(slope == doctest::Approx(-beta).epsilon(0.05));
}

TEST_CASE("shifted-exponent combination loses its naive leading order") {
    // (theta-1) H(theta-1, beta+1) + iy H(theta, beta+1) equals beta times
    // the continued H, so the y^{-(theta-1)} fronts cancel exactly and the
    // decay follows the second endpoint instead.
    double theta = 1.3, beta = 0.8;
    std::vector<double> ly, lv;
    for (int k = 0; k < 40; ++k) {
        double y = 50.0 * std::pow(100.0, k / 39.0);
        cplx comb = (theta - 1.0) * h_function(y, theta - 1.0, beta + 1.0).value +
                    cplx(0.0, y) * h_function(y, theta, beta + 1.0).value;
        ly.push_back(std::log(y));
        lv.push_back(std::log(std::abs(comb)));
    }
    double slope = lsq_slope(ly, lv);
    CHECK(slope == doctest::Approx(-beta).epsilon(0.05));
    CHECK(std::abs(slope - (-(theta - 1.0))) > 0.2);
}

TEST_CASE("evolved weight is continuous in the exponent across dim") {
    // Gamma(lam/2) (4it)^{lam/2} exp(itLap)|x|^{-lam} minus its simple pole
    // at lam = dim extends smoothly through the gap.
    int N = 1;
    double t = 0.7, x = 1.3;
    double y = x * x / (4.0 * t);
    cplx pole_res = std::exp(cplx(0.0, y));  // residue carrier exp(iy)
    std::vector<double> lams{0.7, 0.8, 0.9, 1.1, 1.2, 1.3};
    std::vector<cplx> P;
    for (double lam : lams) {
        cplx S = std::tgamma(0.5 * lam) * std::pow(cplx(0.0, 4.0 * t), 0.5 * lam) *
                 weight_evolution(t, x, lam, N);
        P.push_back(S - pole_res * 2.0 / (N - lam));
    }
    double scale = 0.0;
    for (const cplx& v : P) scale = std::max(scale, std::abs(v));
    // A smooth function has nearly equal curvature on both sides of the
    // removed pole, and one-sided extrapolations to the pole must agree.
    cplx curv_left = P[0] - 2.0 * P[1] + P[2];    // spacing 0.1
    cplx curv_right = P[3] - 2.0 * P[4] + P[5];   // spacing 0.1
    CHECK(std::abs(curv_left - curv_right) < 0.1 * scale);
    // And the jump predicted by one-sided linear extrapolation to lam = 1
    // from the two sides stays small.
    cplx left_at_pole = P[2] + (P[2] - P[1]);   // extrapolate 0.9 -> 1.0 step 0.1
    cplx right_at_pole = P[3] - (P[4] - P[3]);  // extrapolate 1.1 -> 1.0
    CHECK(std::abs(left_at_pole - right_at_pole) < 0.05 * scale);
}

TEST_CASE("free-evolution ratio against the data norm") {
    Grid g(1, 512, 16.0);
    Field u0 = gaussian_field(g);

    // Sup-in-time over the plain mass norm is unitarily exact.
    AdmissiblePair sup_pair(ExtReal::infinity(), ExtReal(2.0), 1, 0.0);
    CHECK(rel_diff(strichartz_ratio(u0, sup_pair, 0.8, 9), 1.0) < 1e-12);

    // Parabolic rescaling leaves the ratio nearly unchanged.
    AdmissiblePair pair(ExtReal(8.0), ExtReal(4.0), 1, 0.0);
    double base = strichartz_ratio(u0, pair, 0.8, 9);
    for (double lam : {0.5, 2.0}) {
        Field ul = sample_physical(g, [&](const std::array<double, 3>& x) {
            double yx = lam * x[0];
            return std::sqrt(lam) * cplx(std::exp(-M_PI * yx * yx), 0.0);
        });
        double scaled = strichartz_ratio(ul, pair, 0.8 / (lam * lam), 9);
        CHECK(rel_diff(scaled, base) < 0.02);
    }

    // One constant covers a five-member family of shapes.
    std::vector<Field> family;
    family.push_back(gaussian_field(g));
    family.push_back(gaussian_field(g, 2.0));
    family.push_back(gaussian_field(g, 0.5));
    family.push_back(sample_physical(g, [&](const std::array<double, 3>& x) {
        return std::exp(cplx(0.0, 3.0 * x[0])) * std::exp(-M_PI * x[0] * x[0]);
    }));
    family.push_back(sample_physical(g, [&](const std::array<double, 3>& x) {
        double r = std::abs(x[0]);
        return r < 1.0 ? cplx(std::exp(-1.0 / (1.0 - r * r)), 0.0) : cplx(0.0);
    }));
    double lo = 1e300, hi = 0.0;
    for (const Field& f : family) {
        double ratio = strichartz_ratio(f, pair, 0.8, 9);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 10.0);
}
