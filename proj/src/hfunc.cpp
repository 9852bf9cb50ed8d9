#include "inls/hfunc.hpp"

#include <cmath>
#include <map>

#include "inls/errors.hpp"
#include "inls/quadrature.hpp"

namespace inls {

namespace {

constexpr double kQuadBudget = 1e-10;   // doubling accepted below this
constexpr double kSeriesBudget = 1e-9;  // expansion accepted below this
constexpr double kYMinSeries = 25.0;    // never expand below this y
constexpr int kMinNodes = 16;
constexpr int kMaxNodes = 512;

// exp(z) - 1 without cancellation for small |z|.
cplx cexpm1(cplx z) {
    if (std::abs(z) > 1e-4) return std::exp(z) - 1.0;
    cplx s = z, term = z;
    for (int k = 2; k <= 6; ++k) {
        term *= z / static_cast<double>(k);
        s += term;
    }
    return s;
}

struct SeriesResult {
    cplx value;
    double err;
    bool ok;
};

// One endpoint series: pref * sum_s t_s with t_0 = 1 and
// t_{s+1} = t_s (c1+s)(c2+s) / ((s+1) z). Optimal truncation: sum while
// terms shrink, report the first omitted term as the error.
void endpoint_series(double c1, double c2, cplx z, cplx pref, cplx& acc, double& err) {
    cplx sum = 0.0, t = 1.0;
    double term_err = 0.0;
    for (int s = 0; s < 400; ++s) {
        cplx tn = t * (c1 + s) * (c2 + s) / ((s + 1.0) * z);
        if (std::abs(t) < 1e-18) {
            sum += t;
            term_err = std::abs(tn);
            break;
        }
        if (s > 0 && std::abs(tn) >= std::abs(t)) {
            sum += t;
            term_err = std::abs(tn);
            break;
        }
        sum += t;
        t = tn;
        term_err = std::abs(tn);
    }
    acc += pref * sum;
    err += std::abs(pref) * term_err;
}

// Full large-y expansion of the integral, from both endpoints:
//   H ~ Gamma(beta) e^{iy} (iy)^{-beta}  sum_s (beta)_s (1-theta)_s / (s! (iy)^s)
//     + Gamma(theta) e^{i pi theta/2} y^{-theta}
//                                        sum_s (theta)_s (1-beta)_s / (s! (-iy)^s)
// Valid for beta in (-1, 0) as well, with the Gamma factor continued.
SeriesResult try_series(double y, double theta, double beta) {
    cplx iy(0.0, y);
    cplx pref1 = std::tgamma(beta) * std::exp(cplx(0.0, y)) * std::pow(y, -beta) *
                 std::exp(cplx(0.0, -M_PI * beta / 2.0));
    cplx pref2 = std::tgamma(theta) * std::pow(y, -theta) *
                 std::exp(cplx(0.0, M_PI * theta / 2.0));
    cplx acc = 0.0;
    double err = 0.0;
    endpoint_series(beta, 1.0 - theta, iy, pref1, acc, err);
    endpoint_series(theta, 1.0 - beta, -iy, pref2, acc, err);
    return {acc, err, err <= kSeriesBudget};
}

// Cached endpoint-absorbing Gauss rules, keyed by the two exponents.
const QuadRule& cached_rule(double p, double q, int n) {
    thread_local std::map<std::tuple<double, double, int>, QuadRule> cache;
    auto key = std::make_tuple(p, q, n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, gauss_jacobi01(n, p, q)).first;
    return it->second;
}

template <class F>
HValue doubling_quadrature(double p, double q, F&& f, HMethod method) {
    auto eval = [&](int n) {
        const QuadRule& r = cached_rule(p, q, n);
        cplx s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
        return s;
    };
    cplx prev = eval(kMinNodes);
    double d = std::abs(prev);
    for (int n = 2 * kMinNodes; n <= kMaxNodes; n *= 2) {
        cplx cur = eval(n);
        d = std::abs(cur - prev);
        prev = cur;
        if (d <= kQuadBudget) break;
    }
    return {prev, std::max(d, 1e-16 * std::abs(prev)), method};
}

HValue h_quadrature(double y, double theta, double beta) {
    return doubling_quadrature(
        theta - 1.0, beta - 1.0, [y](double r) { return std::exp(cplx(0.0, y * r)); },
        HMethod::Quadrature);
}

// Continuation to beta in (-1, 0): subtract the endpoint value e^{iy}
// inside the integral (which removes the divergence) and add it back
// against the continued Beta mass:
//   H = integral_0^1 [(e^{iyr} - e^{iy}) / (1-r)] r^{theta-1} (1-r)^beta dr
//       + e^{iy} B(theta, beta).
HValue h_finite_part(double y, double theta, double beta) {
    cplx eiy = std::exp(cplx(0.0, y));
    HValue v = doubling_quadrature(
        theta - 1.0, beta,
        [y, eiy](double r) {
            return -eiy * cexpm1(cplx(0.0, y * (r - 1.0))) / (r - 1.0);
        },
        HMethod::Extension);
    v.value += eiy * beta_continued(theta, beta);
    return v;
}

void check_common(double y, double theta) {
    if (!(theta > 0.0)) throw DomainError("theta must be positive");
    if (!(y >= 0.0)) throw DomainError("y must be nonnegative");
}

}  // namespace

const char* h_method_name(HMethod m) {
    switch (m) {
        case HMethod::Quadrature: return "quadrature";
        case HMethod::Asymptotic: return "asymptotic";
        case HMethod::Extension: return "extension";
    }
    return "?";
}

double beta_continued(double a, double b) {
    return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
}

HValue h_function(double y, double theta, double beta) {
    check_common(y, theta);
    if (!(beta > 0.0)) throw DomainError("beta must be positive (use the continued form)");
    if (y >= kYMinSeries) {
        SeriesResult s = try_series(y, theta, beta);
        if (s.ok) return {s.value, s.err, HMethod::Asymptotic};
    }
    return h_quadrature(y, theta, beta);
}

HValue h_function_continued(double y, double theta, double beta) {
    if (beta > 0.0) return h_function(y, theta, beta);
    check_common(y, theta);
    if (beta == 0.0) throw PoleError("beta = 0 sits on a pole of the continuation");
    if (!(beta > -1.0)) throw DomainError("continuation covers beta > -1 only");
    if (y >= kYMinSeries) {
        SeriesResult s = try_series(y, theta, beta);
        if (s.ok) return {s.value, s.err, HMethod::Asymptotic};
    }
    return h_finite_part(y, theta, beta);
}

HValue h_asymptotic(double y, double theta, double beta) {
    if (!(y > 0.0)) throw DomainError("asymptotic form needs y > 0");
    if (!(theta > 0.0)) throw DomainError("theta must be positive");
    cplx lead = std::tgamma(theta) * std::exp(cplx(0.0, M_PI * theta / 2.0)) *
                    std::pow(y, -theta) +
                std::tgamma(beta) * std::exp(cplx(0.0, y - M_PI * beta / 2.0)) *
                    std::pow(y, -beta);
    // Next term of each endpoint series, with a safety factor of two.
    double err = 2.0 * (std::abs(std::tgamma(theta) * theta * (1.0 - beta)) *
                            std::pow(y, -theta - 1.0) +
                        std::abs(std::tgamma(beta) * beta * (1.0 - theta)) *
                            std::pow(y, -beta - 1.0));
    return {lead, err, HMethod::Asymptotic};
}

double h_crossover(double theta, double beta) {
    double lo = kYMinSeries;
    if (try_series(lo, theta, beta).ok) return lo;
    double hi = 2.0 * lo;
    while (!try_series(hi, theta, beta).ok) {
        hi *= 2.0;
        if (hi > 1e8) return hi;
    }
    for (int i = 0; i < 60; ++i) {
        double mid = std::sqrt(lo * hi);
        (try_series(mid, theta, beta).ok ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace inls
