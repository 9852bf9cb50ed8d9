#include "inls/ineq.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "inls/errors.hpp"
#include "inls/fft.hpp"
#include "inls/norms.hpp"
#include "inls/weights.hpp"
#include "support/testutil.hpp"

using namespace inls;

namespace {

const unsigned kSeed = 20260823;

// Largest |f| on the boundary faces of the box.
double boundary_max(const Field& f) {
    const Grid& g = f.grid;
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        auto j = g.unflatten(i);
        bool on_face = false;
        for (int d = 0; d < g.dim; ++d)
            if (j[d] == 0) on_face = true;
        if (on_face) worst = std::max(worst, std::abs(f.values[i]));
    }
    return worst;
}

LeibnizExponents matched_leibniz() {
    LeibnizExponents ex;
    ex.p = ExtReal(1.0);
    ex.p1 = ex.q1 = ex.p2 = ex.q2 = ExtReal(2.0);
    return ex;
}

}  // namespace

TEST_CASE("test family members decay below the boundary threshold") {
    Grid g(1, 512, 16.0);
    TestFamily fam = make_test_family(g, kSeed);
    CHECK(fam.members.size() == 5);
    for (const FamilyMember& m : fam.members) {
        for (double lam : fam.dilation_ladder) {
            Field f = fam.realize(m, lam);
            CHECK(boundary_max(f) < 1e-10);
            CHECK(lp_norm(f, ExtReal(2.0)) > 0.0);
        }
    }
}

TEST_CASE("region norms partition the full norm") {
    Grid g(1, 256, 16.0);
    TestFamily fam = make_test_family(g, kSeed);
    Field f = fam.realize(fam.members[0], 1.0);
    Region A = ball_region(1.0);
    double p = 2.0;
    double inside = lp_norm_region(f, ExtReal(p), A, false);
    double outside = lp_norm_region(f, ExtReal(p), A, true);
    double whole = lp_norm(f, ExtReal(p));
    CHECK(testutil::rel_diff(std::pow(inside, p) + std::pow(outside, p),
                             std::pow(whole, p)) < 1e-13);
}

TEST_CASE("leibniz commutator vanishes for constant factor") {
    Grid g(1, 256, 16.0);
    Field f = testutil::gaussian_field(g);
    Field one(g, Space::Physical);
    for (cplx& v : one.values) v = 1.0;
    RatioReport rep =
        leibniz_commutator_test(f, one, 0.5, ball_region(1.0), matched_leibniz());
    CHECK(rep.entries.size() == 1);
    CHECK(rep.entries[0].lhs < 1e-10 * lp_norm(f, ExtReal(1.0)));
}

TEST_CASE("leibniz commutator is symmetric in its factors") {
    Grid g(1, 256, 16.0);
    TestFamily fam = make_test_family(g, kSeed);
    Field f = fam.realize(fam.members[0], 1.0);
    Field h = fam.realize(fam.members[4], 1.0);
    Region A = ball_region(1.0);
    LeibnizExponents ex = matched_leibniz();
    double lhs_fh = leibniz_commutator_test(f, h, 0.5, A, ex).entries[0].lhs;
    double lhs_hf = leibniz_commutator_test(h, f, 0.5, A, ex).entries[0].lhs;
    CHECK(testutil::rel_diff(lhs_fh, lhs_hf) < 1e-12);
}

TEST_CASE("leibniz commutator ratio is dilation-stable at matched exponents") {
    Grid g(1, 512, 16.0);
    TestFamily fam = make_test_family(g, kSeed);
    Region A = ball_region(1.0);
    LeibnizExponents ex = matched_leibniz();
    std::vector<RatioEntry> entries;
    for (double lam : fam.dilation_ladder) {
        Field f = fam.realize(fam.members[0], lam);
        RatioReport one = leibniz_commutator_test(f, f, 0.5, A, ex);
        RatioEntry e = one.entries[0];
        e.member = "gauss@" + std::to_string(lam);
        CHECK(std::isfinite(e.ratio));
        CHECK(e.ratio > 0.0);
        entries.push_back(e);
    }
    RatioReport rep = merge_entries("gen_leib_1", entries, true);
    CHECK(rep.ratio_spread >= 1.0);
    CHECK(rep.ratio_spread < 3.0);
}

TEST_CASE("leibniz commutator validates its exponents") {
    Grid g(1, 128, 16.0);
    Field f = testutil::gaussian_field(g);
    LeibnizExponents bad = matched_leibniz();
    bad.q1 = ExtReal(3.0);  // 1/2 + 1/3 != 1
    CHECK_THROWS_AS(
        (void)leibniz_commutator_test(f, f, 0.5, ball_region(1.0), bad),
        ExponentMismatch);
    CHECK_THROWS_AS((void)leibniz_commutator_test(f, f, 1.5, ball_region(1.0),
                                                  matched_leibniz()),
                    DomainError);
}

TEST_CASE("weighted interpolation ratio at order zero and epsilon stability") {
    Grid g(1, 512, 16.0);
    TestFamily fam = make_test_family(g, kSeed);
    Field f = fam.realize(fam.members[0], 1.0);
    double h = g.h();

    // s = 0: the derivative is the identity, so the commutator term
    // vanishes by algebra and the whole LHS is the weighted norm.
    RatioReport rep0 = weighted_interp_test(f, 0.4, 0.0, 1.5, 0.05, h);
    Field w = eval_weight(g, 0.4, h);
    Field wf = w;
    for (std::size_t i = 0; i < wf.values.size(); ++i)
        wf.values[i] = w.values[i] * f.values[i];
    double wf_norm = lp_norm(wf, ExtReal(1.5));
    CHECK(std::abs(rep0.entries[0].lhs - wf_norm) < 1e-10 * wf_norm);
    CHECK(std::isfinite(rep0.entries[0].ratio));

    // In-hypothesis fractional order, stable under halving epsilon.
    RatioReport r1 = weighted_interp_test(f, 0.4, 0.2, 1.5, 0.05, h);
    RatioReport r2 = weighted_interp_test(f, 0.4, 0.2, 1.5, 0.05, 0.5 * h);
    CHECK(std::isfinite(r1.entries[0].ratio));
    CHECK(std::isfinite(r2.entries[0].ratio));
    double rr = r1.entries[0].ratio / r2.entries[0].ratio;
    CHECK(rr > 1.0 / 1.5);
    CHECK(rr < 1.5);
}

TEST_CASE("weighted interpolation ratio is dilation-stable") {
    Grid g(1, 512, 16.0);
    TestFamily fam = make_test_family(g, kSeed);
    std::vector<RatioEntry> entries;
    for (double lam : fam.dilation_ladder) {
        Field f = fam.realize(fam.members[1], lam);
        RatioReport one = weighted_interp_test(f, 0.4, 0.2, 1.5, 0.05, 0.5 * g.h());
        RatioEntry e = one.entries[0];
        e.member = "gauss_wide@" + std::to_string(lam);
        CHECK(std::isfinite(e.ratio));
        entries.push_back(e);
    }
    RatioReport rep = merge_entries("basic_interp", entries, true);
    CHECK(rep.ratio_spread < 3.0);
}

TEST_CASE("weighted interpolation rejects out-of-hypothesis parameters") {
    Grid g(1, 256, 16.0);
    Field f = testutil::gaussian_field(g);
    // p outside (1, N/a)
    CHECK_THROWS_AS((void)weighted_interp_test(f, 0.4, 0.1, 3.0, 0.05, g.h()),
                    DomainError);
    // s at the boundary N/p - a
    CHECK_THROWS_AS(
        (void)weighted_interp_test(f, 0.4, 1.0 / 1.5 - 0.4, 1.5, 0.05, g.h()),
        DomainError);
    // eta so large that q_{+eta} leaves (1, infinity)
    CHECK_THROWS_AS((void)weighted_interp_test(f, 0.4, 0.1, 1.5, 0.5, g.h()),
                    DomainError);
}

TEST_CASE("weighted norm ratio diverges under refinement past the hypothesis") {
    // Sharpness probe at s > N/p - a, assembled from the raw pieces since
    // the lemma operation itself validates its hypotheses: the continuum
    // LHS is infinite there, so the discrete ratio must grow as epsilon
    // follows the grid down.
    double a = 0.4, s = 0.4, p = 1.5, eta = 0.05;
    std::vector<double> ratios;
    for (int logM : {9, 11, 13}) {
        Grid g(1, 1 << logM, 16.0);
        Field f = testutil::gaussian_field(g);
        Field w = eval_weight(g, a, 0.5 * g.h());
        Field wf = w;
        for (std::size_t i = 0; i < wf.values.size(); ++i)
            wf.values[i] = w.values[i] * f.values[i];
        double lhs = lp_norm(fractional_derivative(wf, s), ExtReal(p));
        Field dsf = fractional_derivative(f, s);
        double inv_qp = 1.0 / p - (a + eta) / 1.0;
        double inv_qm = 1.0 / p - (a - eta) / 1.0;
        double rhs = std::sqrt(lp_norm(dsf, ExtReal(1.0 / inv_qp)) *
                               lp_norm(dsf, ExtReal(1.0 / inv_qm)));
        ratios.push_back(lhs / rhs);
    }
    CHECK(ratios[1] > ratios[0]);
    CHECK(ratios[2] > ratios[1]);
    CHECK(ratios[2] > 1.2 * ratios[0]);
}

TEST_CASE("lipschitz chain rule ratio across the family") {
    Grid g(1, 512, 16.0);
    TestFamily fam = make_test_family(g, kSeed);
    ChainConfig cfg;
    cfg.p = ExtReal(1.5);
    cfg.first = ExtReal(6.0);
    cfg.second = ExtReal(2.0);
    std::vector<RatioEntry> entries;
    for (double lam : fam.dilation_ladder) {
        Field u = fam.realize(fam.members[0], lam);
        RatioReport one = chain_rule_test(u, 0.5, 2.0, ChainVariant::Lipschitz, cfg);
        CHECK(one.lemma_id == "chain_2");
        RatioEntry e = one.entries[0];
        CHECK(std::isfinite(e.ratio));
        CHECK(e.ratio > 0.0);
        entries.push_back(e);
    }
    RatioReport rep = merge_entries("chain_2", entries, true);
    CHECK(rep.ratio_spread < 3.0);

    for (const FamilyMember& m : fam.members) {
        Field u = fam.realize(m, 1.0);
        RatioReport one = chain_rule_test(u, 0.5, 2.0, ChainVariant::Lipschitz, cfg);
        CHECK(std::isfinite(one.max_ratio));
    }
}

TEST_CASE("hoelder chain rule ratio across the family") {
    Grid g(1, 512, 16.0);
    TestFamily fam = make_test_family(g, kSeed);
    ChainConfig cfg;
    cfg.p = ExtReal(2.0);
    cfg.first = ExtReal(4.0);
    cfg.second = ExtReal(4.0);
    cfg.sigma = 0.9;
    for (const FamilyMember& m : fam.members) {
        Field u = fam.realize(m, 1.0);
        RatioReport one = chain_rule_test(u, 0.3, 0.5, ChainVariant::Hoelder, cfg);
        CHECK(one.lemma_id == "chain_3");
        CHECK(std::isfinite(one.max_ratio));
    }

    // Hypothesis validation: sigma below s/alpha, and the side condition
    // (1 - s/(alpha sigma)) p1 > 1.
    Field u = fam.realize(fam.members[0], 1.0);
    ChainConfig bad = cfg;
    bad.sigma = 0.5;  // below s/alpha = 0.6
    CHECK_THROWS_AS((void)chain_rule_test(u, 0.3, 0.5, ChainVariant::Hoelder, bad),
                    ExponentMismatch);
    CHECK_THROWS_AS((void)chain_rule_test(u, 0.3, 2.0, ChainVariant::Hoelder, cfg),
                    DomainError);
}

TEST_CASE("difference estimate vanishes at equal arguments") {
    Grid g(1, 256, 16.0);
    Field u = testutil::gaussian_field(g);
    ChainConfig cfg;
    cfg.p = ExtReal(1.5);
    cfg.first = ExtReal(6.0);
    cfg.second = ExtReal(2.0);
    cfg.v = &u;
    RatioReport rep = chain_rule_test(u, 0.5, 2.0, ChainVariant::Difference, cfg);
    CHECK(rep.lemma_id == "diff_estim");
    CHECK(rep.entries[0].lhs == 0.0);
}

TEST_CASE("difference estimate ratios on both alpha branches") {
    Grid g(1, 512, 16.0);
    TestFamily fam = make_test_family(g, kSeed);
    ChainConfig cfg;
    cfg.p = ExtReal(1.5);
    cfg.first = ExtReal(6.0);
    cfg.second = ExtReal(2.0);

    for (double alpha : {2.0, 0.5}) {
        std::vector<RatioEntry> entries;
        for (double lam : fam.dilation_ladder) {
            Field u = fam.realize(fam.members[0], lam);
            Field pert = fam.realize(fam.members[2], lam);
            Field v = u;
            for (std::size_t i = 0; i < v.values.size(); ++i)
                v.values[i] += 0.1 * pert.values[i];
            ChainConfig c = cfg;
            c.v = &v;
            RatioReport one =
                chain_rule_test(u, 0.5, alpha, ChainVariant::Difference, c);
            RatioEntry e = one.entries[0];
            CHECK(std::isfinite(e.ratio));
            CHECK(e.ratio > 0.0);
            entries.push_back(e);
        }
        RatioReport rep = merge_entries("diff_estim", entries, true);
        CHECK(rep.ratio_spread < 3.0);
    }

    Grid gsmall(1, 128, 16.0);
    Field u = testutil::gaussian_field(gsmall);
    ChainConfig nov = cfg;
    CHECK_THROWS_AS((void)chain_rule_test(u, 0.5, 2.0, ChainVariant::Difference, nov),
                    DomainError);
}
