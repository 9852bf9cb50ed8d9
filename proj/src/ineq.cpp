#include "inls/ineq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "inls/errors.hpp"
#include "inls/fft.hpp"
#include "inls/kernels.hpp"
#include "inls/norms.hpp"
#include "inls/weights.hpp"

namespace inls {

namespace {

constexpr double kEqTol = 1e-9;

// Checks 1/pi + 1/qi = 1/p and the open-interval side conditions shared
// by the split-exponent lemmas.
void check_pair(ExtReal p, ExtReal pi, ExtReal qi, const char* which) {
    if (p.is_infinite() || !(p.value() > 0.0))
        throw ExponentMismatch("p must be finite and positive");
    if (!pi.is_infinite() && !(pi.value() > 1.0))
        throw ExponentMismatch(std::string(which) + ": exponent must exceed 1");
    if (!qi.is_infinite() && !(qi.value() > 1.0))
        throw ExponentMismatch(std::string(which) + ": exponent must exceed 1");
    double lhs = pi.reciprocal() + qi.reciprocal();
    if (std::abs(lhs - p.reciprocal()) > kEqTol)
        throw ExponentMismatch(std::string(which) +
                               ": 1/p_i + 1/q_i = 1/p fails");
}

std::array<double, 3> coords_of(const Grid& g, std::size_t idx) {
    auto j = g.unflatten(idx);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int d = 0; d < g.dim; ++d) x[d] = g.coord(j[d]);
    return x;
}

Field pointwise_sub(const Field& a, const Field& b) {
    Field out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
    return out;
}

Field pointwise_mul(const Field& a, const Field& b) {
    Field out = a;
    kernels::multiply(a.values, b.values, out.values);
    return out;
}

// |u|^alpha as a real-valued field.
Field abs_power(const Field& u, double alpha) {
    Field out = u;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = cplx(std::pow(std::abs(u.values[i]), alpha), 0.0);
    return out;
}

Field power_nl(const Field& u, double alpha) {
    Field out = u;
    kernels::power_nonlinearity(u.values, alpha, out.values);
    return out;
}

RatioEntry make_entry(std::string member, double lhs, double rhs) {
    RatioEntry e;
    e.member = std::move(member);
    e.lhs = lhs;
    e.rhs = rhs;
    e.ratio = (lhs == 0.0 && rhs == 0.0)
                  ? 0.0
                  : lhs / (rhs > 0.0 ? rhs : std::numeric_limits<double>::min());
    return e;
}

}  // namespace

Region ball_region(double radius) {
    double r2 = radius * radius;
    return [r2](const std::array<double, 3>& x) {
        return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] < r2;
    };
}

double lp_norm_region(const Field& f, ExtReal p, const Region& A, bool complement) {
    if (f.space != Space::Physical)
        throw DomainError("region norms need a physical-space field");
    const Grid& g = f.grid;
    double cell = std::pow(g.h(), g.dim);
    double acc = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (A(coords_of(g, i)) == complement) continue;
        double a = std::abs(f.values[i]);
        if (p.is_infinite())
            worst = std::max(worst, a);
        else
            acc += std::pow(a, p.value());
    }
    if (p.is_infinite()) return worst;
    return std::pow(acc * cell, 1.0 / p.value());
}

Field TestFamily::realize(const FamilyMember& m, double lambda) const {
    if (!(lambda > 0.0)) throw DomainError("dilation factor must be positive");
    return sample_physical(grid, [&](const std::array<double, 3>& x) {
        std::array<double, 3> y{x[0] / lambda, x[1] / lambda, x[2] / lambda};
        return m.profile(y);
    });
}

TestFamily make_test_family(const Grid& g, unsigned seed) {
    TestFamily fam;
    fam.grid = g;
    fam.dilation_ladder = {0.5, 1.0, 2.0};

    auto r2_of = [dim = g.dim](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int d = 0; d < dim; ++d) r2 += x[d] * x[d];
        return r2;
    };

    fam.members.push_back({"gauss", [r2_of](const std::array<double, 3>& x) {
                               return cplx(std::exp(-M_PI * r2_of(x)), 0.0);
                           }});
    fam.members.push_back({"gauss_wide", [r2_of](const std::array<double, 3>& x) {
                               return cplx(std::exp(-M_PI * r2_of(x) / 4.0), 0.0);
                           }});
    fam.members.push_back({"modulated", [r2_of](const std::array<double, 3>& x) {
                               return std::polar(std::exp(-M_PI * r2_of(x)),
                                                 1.5 * x[0]);
                           }});
    fam.members.push_back({"bump", [r2_of](const std::array<double, 3>& x) {
                               double q = r2_of(x) / 16.0;  // support radius 4
                               if (q >= 1.0) return cplx(0.0);
                               return cplx(std::exp(1.0 - 1.0 / (1.0 - q)), 0.0);
                           }});

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::array<double, 4> ac{}, bc{};
    for (int m = 0; m < 4; ++m) {
        ac[m] = unif(rng);
        bc[m] = unif(rng);
    }
    fam.members.push_back(
        {"randlow", [r2_of, ac, bc](const std::array<double, 3>& x) {
             double tp = 0.0;
             for (int m = 0; m < 4; ++m)
                 tp += ac[m] * std::cos(0.4 * (m + 1) * x[0]) +
                       bc[m] * std::sin(0.4 * (m + 1) * x[0]);
             return cplx(tp * std::exp(-M_PI * r2_of(x) / 4.0), 0.0);
         }});
    return fam;
}

RatioReport merge_entries(const std::string& lemma_id,
                          std::vector<RatioEntry> entries, bool scaling_matched) {
    RatioReport rep;
    rep.lemma_id = lemma_id;
    rep.entries = std::move(entries);
    double lo = std::numeric_limits<double>::infinity();
    for (const RatioEntry& e : rep.entries) {
        rep.max_ratio = std::max(rep.max_ratio, e.ratio);
        if (e.ratio > 0.0) lo = std::min(lo, e.ratio);
    }
    if (scaling_matched && std::isfinite(lo) && lo > 0.0)
        rep.ratio_spread = rep.max_ratio / lo;
    return rep;
}

RatioReport leibniz_commutator_test(const Field& f, const Field& g, double s,
                                    const Region& A, const LeibnizExponents& ex) {
    if (!(s > 0.0) || !(s < 1.0))
        throw DomainError("leibniz commutator needs 0 < s < 1");
    if (!(f.grid == g.grid)) throw DomainError("fields live on different grids");
    check_pair(ex.p, ex.p1, ex.q1, "pair 1");
    check_pair(ex.p, ex.p2, ex.q2, "pair 2");

    Field fg = pointwise_mul(f, g);
    Field ds_fg = fractional_derivative(fg, s);
    Field ds_f = fractional_derivative(f, s);
    Field ds_g = fractional_derivative(g, s);
    Field comm = pointwise_sub(pointwise_sub(ds_fg, pointwise_mul(ds_f, g)),
                               pointwise_mul(f, ds_g));

    double lhs = lp_norm(comm, ex.p);
    double rhs = lp_norm_region(f, ex.p1, A, false) * lp_norm(ds_g, ex.q1) +
                 lp_norm_region(f, ex.p2, A, true) * lp_norm(ds_g, ex.q2);
    RatioReport rep;
    rep.lemma_id = "gen_leib_1";
    rep.entries.push_back(make_entry("single", lhs, rhs));
    rep.max_ratio = rep.entries.back().ratio;
    return rep;
}

RatioReport weighted_interp_test(const Field& f, double a, double s, double p,
                                 double eta, double eps) {
    const Grid& g = f.grid;
    int N = g.dim;
    if (!(a > 0.0)) throw DomainError("weight exponent a must be positive");
    if (!(p > 1.0) || !(p < N / a))
        throw DomainError("needs 1 < p < N/a");
    if (!(s >= 0.0) || !(s < N / p - a))
        throw DomainError("needs 0 <= s < N/p - a");
    if (!(eta > 0.0)) throw DomainError("eta must be positive");
    double inv_qp = 1.0 / p - (a + eta) / N;
    double inv_qm = 1.0 / p - (a - eta) / N;
    if (!(inv_qp > 0.0) || !(inv_qp < 1.0) || !(inv_qm > 0.0) || !(inv_qm < 1.0))
        throw DomainError("q_{+-eta} leaves (1, infinity); shrink eta");

    Field w = eval_weight(g, a, eps);
    Field wf = pointwise_mul(w, f);
    Field ds_wf = fractional_derivative(wf, s);
    Field ds_w = fractional_derivative(w, s);
    Field comm = pointwise_sub(ds_wf, pointwise_mul(ds_w, f));
    Field ds_f = fractional_derivative(f, s);

    double lhs = lp_norm(ds_wf, ExtReal(p)) + lp_norm(comm, ExtReal(p));
    double rhs = std::sqrt(lp_norm(ds_f, ExtReal(1.0 / inv_qp)) *
                           lp_norm(ds_f, ExtReal(1.0 / inv_qm)));
    RatioReport rep;
    rep.lemma_id = "basic_interp";
    rep.entries.push_back(make_entry("single", lhs, rhs));
    rep.max_ratio = rep.entries.back().ratio;
    return rep;
}

RatioReport chain_rule_test(const Field& u, double s, double alpha,
                            ChainVariant variant, const ChainConfig& cfg) {
    if (!(s > 0.0) || !(s < 1.0))
        throw DomainError("chain rules need 0 < s < 1");
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    RatioReport rep;

    if (variant == ChainVariant::Lipschitz) {
        if (cfg.p.is_infinite() || cfg.first.is_infinite() || cfg.second.is_infinite())
            throw ExponentMismatch("Lipschitz chain rule needs finite exponents");
        if (!(cfg.p.value() > 1.0))
            throw ExponentMismatch("Lipschitz chain rule needs p > 1");
        check_pair(cfg.p, cfg.first, cfg.second, "lipschitz split");
        Field fu = power_nl(u, alpha);
        double lhs = lp_norm(fractional_derivative(fu, s), cfg.p);
        double rhs = std::pow(lp_norm(u, ExtReal(alpha * cfg.first.value())), alpha) *
                     lp_norm(fractional_derivative(u, s), cfg.second);
        rep.lemma_id = "chain_2";
        rep.entries.push_back(make_entry("single", lhs, rhs));
    } else if (variant == ChainVariant::Hoelder) {
        if (!(alpha < 1.0))
            throw DomainError("Hoelder chain rule needs alpha < 1");
        if (!(s < alpha)) throw DomainError("Hoelder chain rule needs s < alpha");
        double sigma = cfg.sigma > 0.0 ? cfg.sigma : 0.5 * (s / alpha + 1.0);
        if (!(sigma > s / alpha) || !(sigma < 1.0))
            throw ExponentMismatch("sigma must lie in (s/alpha, 1)");
        if (cfg.p.is_infinite() || cfg.first.is_infinite() || cfg.second.is_infinite())
            throw ExponentMismatch("Hoelder chain rule needs finite exponents");
        if (!(cfg.p.value() > 1.0))
            throw ExponentMismatch("Hoelder chain rule needs p > 1");
        check_pair(cfg.p, cfg.first, cfg.second, "hoelder split");
        double p1 = cfg.first.value(), p2 = cfg.second.value();
        if (!((1.0 - s / (alpha * sigma)) * p1 > 1.0))
            throw ExponentMismatch("(1 - s/(alpha sigma)) p1 > 1 fails");
        Field fu = abs_power(u, alpha);
        double lhs = lp_norm(fractional_derivative(fu, s), cfg.p);
        double e1 = alpha - s / sigma;
        double e2 = s / sigma;
        double rhs = std::pow(lp_norm(u, ExtReal(e1 * p1)), e1) *
                     std::pow(lp_norm(fractional_derivative(u, sigma),
                                      ExtReal(e2 * p2)),
                              e2);
        rep.lemma_id = "chain_3";
        rep.entries.push_back(make_entry("single", lhs, rhs));
    } else {
        if (cfg.v == nullptr)
            throw DomainError("Difference variant needs a comparison field");
        const Field& v = *cfg.v;
        if (!(v.grid == u.grid)) throw DomainError("fields live on different grids");
        if (cfg.p.is_infinite() || !(cfg.p.value() >= 1.0))
            throw ExponentMismatch("Difference needs finite p >= 1");
        if (cfg.first.is_infinite() || cfg.second.is_infinite())
            throw ExponentMismatch("Difference needs finite q, r");
        check_pair(cfg.p, cfg.first, cfg.second, "difference split");
        double q = cfg.first.value(), r = cfg.second.value();

        Field diff_nl = pointwise_sub(power_nl(u, alpha), power_nl(v, alpha));
        double lhs = lp_norm(fractional_derivative(diff_nl, s), cfg.p);

        double u_aq = lp_norm(u, ExtReal(alpha * q));
        double v_aq = lp_norm(v, ExtReal(alpha * q));
        double ds_u = lp_norm(fractional_derivative(u, s), ExtReal(r));
        double ds_v = lp_norm(fractional_derivative(v, s), ExtReal(r));
        Field du = pointwise_sub(u, v);
        double dd = lp_norm(fractional_derivative(du, s), ExtReal(r));
        double d_aq = lp_norm(du, ExtReal(alpha * q));

        double rhs = std::pow(u_aq + v_aq, alpha) * dd;
        if (alpha >= 1.0)
            rhs += (ds_u + ds_v) * std::pow(u_aq + v_aq, alpha - 1.0) * d_aq;
        else
            rhs += (ds_u + ds_v) * std::pow(d_aq, alpha);
        rep.lemma_id = "diff_estim";
        rep.entries.push_back(make_entry("single", lhs, rhs));
    }
    rep.max_ratio = rep.entries.back().ratio;
    return rep;
}

}  // namespace inls
