#include "inls/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "inls/numfmt.hpp"

namespace inls {

namespace {

using Rat = boost::multiprecision::cpp_rational;

// Equality tolerance for float-valued hypotheses (alpha an even integer,
// b+s a natural number, alpha at the critical value).
constexpr double kEqTol = 1e-9;
// Closure tolerance for open/closed window comparisons, chosen so the
// classifier and the feasibility solver flip at the same parameter.
constexpr double kBoundaryTol = 1e-12;
constexpr int kGridPoints = 10000;
constexpr int kMaxEtaShrinks = 40;

bool is_natural(double x) {
    return x >= 1.0 - kEqTol && std::abs(x - std::round(x)) < kEqTol;
}

std::string yn(bool v) { return v ? "true" : "false"; }

std::string kv_lines(const std::map<std::string, std::string>& kv) {
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

}  // namespace

bool is_even_integer(double a) {
    if (a < 2.0 - kEqTol) return false;
    double half = a / 2.0;
    return std::abs(half - std::round(half)) < kEqTol / 2.0;
}

double critical_index(const ProblemParams& p) {
    return p.N / 2.0 - (2.0 - p.b) / p.alpha;
}

ExtReal alpha_max(int N, double s, double b) {
    if (s >= N / 2.0) return ExtReal::infinity();
    return ExtReal((4.0 - 2.0 * b) / (N - 2.0 * s));
}

bool is_admissible(ExtReal q, ExtReal r, int N, double s) {
    auto in_range = [](const ExtReal& e) {
        return e.is_infinite() || e.value() >= 2.0 - kBoundaryTol;
    };
    if (!in_range(q) || !in_range(r)) return false;
    if (q == ExtReal(2.0) && r.is_infinite() && N == 2) return false;
    double lhs = 2.0 * q.reciprocal();
    double rhs = N / 2.0 - N * r.reciprocal() - s;
    return std::abs(lhs - rhs) <= kBoundaryTol;
}

AdmissiblePair::AdmissiblePair(ExtReal q_, ExtReal r_, int N_, double s_)
    : q(q_), r(r_), N(N_), s(s_) {
    if (s <= -1.0 || s >= 1.0)
        throw ExponentMismatch("pair index s must lie in (-1, 1), got s = " + fmt_shortest(s));
    if (!is_admissible(q, r, N, s))
        throw ExponentMismatch("pair (q, r) = (" + q.str() + ", " + r.str() +
                               ") fails 2/q = N/2 - N/r - s at N = " + fmt_int(N) +
                               ", s = " + fmt_shortest(s));
}

bool in_set_As(ExtReal q, ExtReal r, int N, double s, double tol, const AsOptions& opts) {
    if (std::abs(std::abs(s) - 1.0) < kBoundaryTol && N < 3)
        throw DomainError("the |s| = 1 exponent families require N >= 3, got N = " + fmt_int(N));

    auto in_range = [](const ExtReal& e) {
        return e.is_infinite() || e.value() >= 2.0 - kBoundaryTol;
    };
    if (!in_range(q) || !in_range(r)) return false;
    if (q == ExtReal(2.0) && r.is_infinite() && N == 2) return false;
    // Pair identity, accepted up to an N*tol residual so that endpoints
    // shifted by O(tol) in r remain recognizable.
    double resid = 2.0 * q.reciprocal() - (N / 2.0 - N * r.reciprocal() - s);
    if (std::abs(resid) > N * tol) return false;

    double inf = std::numeric_limits<double>::infinity();
    double rv = r.is_infinite() ? inf : r.value();
    double abss = std::abs(s);

    if (std::abs(abss - 1.0) < kBoundaryTol) {
        // Closed windows around the endpoint exponent, from the eps0/eps1
        // convention (Foschi-type endpoint pairs).
        double lo, hi;
        if (s > 0) {
            lo = 2.0 * N / (N - 2.0 - opts.eps0 / 2.0);
            hi = 2.0 * N / (N - 2.0 - opts.eps0);
        } else {
            lo = 2.0 * N / (N - 2.0 + 2.0 * opts.eps1);
            hi = 2.0 * N / (N - 2.0 + opts.eps1);
        }
        return rv >= lo && rv <= hi;
    }

    double lo, hi;
    bool lo_open, hi_open;
    if (abss < kBoundaryTol) {
        lo = 2.0;
        lo_open = true;
        if (N >= 3) {
            hi = 2.0 * N / (N - 2.0);
            hi_open = false;
        } else {
            hi = opts.r_cap;  // convention for the unbounded range
            hi_open = false;
        }
    } else {
        lo = 2.0 * N / (N - 2.0 * abss);
        lo_open = true;
        if (N >= 3) {
            hi = 2.0 * N / (N - 2.0);
            hi_open = true;
        } else {
            hi = opts.r_cap;  // convention for the unbounded range
            hi_open = false;
        }
    }
    if (lo_open && rv < lo + tol) return false;
    if (!lo_open && rv < lo) return false;
    if (hi_open && rv > hi - tol) return false;
    if (!hi_open && rv > hi) return false;
    return true;
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::SubcriticalWP: return "SubcriticalWP";
        case Regime::CriticalWP: return "CriticalWP";
        case Regime::IllPosed: return "IllPosed";
        case Regime::OutOfScope: return "OutOfScope";
    }
    return "?";
}

std::string feas_mode_name(FeasMode m) {
    switch (m) {
        case FeasMode::Inhomogeneous: return "Inhomogeneous";
        case FeasMode::Homogeneous: return "Homogeneous";
        case FeasMode::Critical: return "Critical";
    }
    return "?";
}

std::string RegimeReport::record() const {
    std::map<std::string, std::string> kv;
    kv["regime"] = regime_name(regime);
    kv["s_c"] = fmt_shortest(s_c);
    kv["alpha_s"] = alpha_s.is_infinite() ? "inf" : fmt_shortest(alpha_s.value());
    for (std::size_t i = 0; i < reasons.size(); ++i) {
        char key[16];
        std::snprintf(key, sizeof(key), "reason_%02zu", i);
        kv[key] = reasons[i];
    }
    return kv_lines(kv);
}

RegimeReport classify(const ProblemParams& p) {
    RegimeReport rep;
    rep.s_c = critical_index(p);
    rep.alpha_s = alpha_max(p.N, p.s, p.b);
    const double N = p.N, s = p.s, b = p.b, a = p.alpha;
    auto note = [&rep](const std::string& line) { rep.reasons.push_back(line); };

    // Obstruction checklist: parameter ranges where no smooth data-to-
    // solution map can exist, so they take precedence over the
    // well-posedness checklists at shared boundary values.
    bool i_b = b > 0.0 && b < N;
    double ill_lo = std::min(N, N / 2.0 + 1.0);
    bool i_range = (b + s >= ill_lo - kBoundaryTol) && (b + s < N / 2.0 + 2.0 - kBoundaryTol);
    bool i_even = is_even_integer(a);
    bool i_nat_ok = (b + s < N - kBoundaryTol) || !is_natural(b + s);
    note("obstruction: 0 < b < N: " + yn(i_b));
    note("obstruction: min{N, N/2+1} <= b+s < N/2+2: " + yn(i_range));
    note("obstruction: alpha is an even positive integer: " + yn(i_even));
    note("obstruction: b+s not a natural number when b+s >= N: " + yn(i_nat_ok));
    bool ill = i_b && i_range && i_even && i_nat_ok;

    // Well-posedness checklist for inhomogeneous-Sobolev data.
    double bcap = std::min({2.0, N - s, N / 2.0 + 1.0 - s});
    bool w_b = b > 0.0 && b < bcap - kBoundaryTol;
    bool w_proviso = i_even || (s < a + 1.0 - kBoundaryTol);
    bool crit = !rep.alpha_s.is_infinite() && std::abs(a - rep.alpha_s.value()) < kEqTol;
    bool sub = !crit && (rep.alpha_s.is_infinite() || a < rep.alpha_s.value());
    note("wellposed: 0 < b < min{2, N-s, N/2+1-s}: " + yn(w_b));
    note("wellposed: s < alpha+1 when alpha is not an even integer: " + yn(w_proviso));
    note("wellposed: alpha below the critical power: " + yn(sub));
    note("wellposed: alpha at the critical power: " + yn(crit));

    // Homogeneous-data route, recorded alongside; its extra hypotheses
    // never enlarge the regime (they are strictly stronger).
    bool h_range = s >= 0.0 && s <= 1.0 + kBoundaryTol && s < N / 2.0 - kBoundaryTol;
    bool h_n1 = (p.N != 1) || crit || a >= 1.0 - kBoundaryTol;
    note("homogeneous-data route: 0 <= s <= 1 and s < N/2: " + yn(h_range));
    note("homogeneous-data route: alpha >= 1 when N = 1 (subcritical): " + yn(h_n1));
    note("metadata: continuous dependence available (s <= 1): " + yn(s <= 1.0 + kBoundaryTol));

    if (ill)
        rep.regime = Regime::IllPosed;
    else if (w_b && w_proviso && sub)
        rep.regime = Regime::SubcriticalWP;
    else if (w_b && w_proviso && crit)
        rep.regime = Regime::CriticalWP;
    else
        rep.regime = Regime::OutOfScope;
    return rep;
}

namespace {

// One side of the admissible 1/rho window, with the inequality it encodes.
struct Bound {
    double value;
    std::string what;
};

struct UWindow {
    double lo = 0.0, hi = 0.0;  // open interval in u = 1/rho
    std::string lo_what, hi_what;
};

// Window in u = 1/rho for the shared exponent chain
//   1/rho' = b/N + 1/r1, 1/r1 = alpha/r2 + 1/r3,
//   1/r2 = 1/r3 - s_tilde/N, 2/q3 = N/2 - N/r3,
// with 2 < rho, r3 < ceiling and 0 < 1/r2.
UWindow chain_window(int N, double b, double alpha, double st, FeasMode mode) {
    double inv2star = (N >= 3) ? (N - 2.0) / (2.0 * N) : 0.0;
    Bound lo = {0.0, "rho finite"};
    Bound cand_lo[] = {
        {(N - 2.0 * b - alpha * (N - 2.0 * st)) / (2.0 * N), "r3 > 2"},
        {inv2star, "2 < rho below the admissible ceiling"},
        {-(alpha + (b + st) / N), "r2 >= 1 in the weighted Hoelder split"},
    };
    for (const auto& c : cand_lo)
        if (c.value > lo.value) lo = c;
    Bound hi = {0.5, "rho > 2"};
    Bound cand_hi[] = {
        {1.0 - b / N + alpha * st / N - (alpha + 1.0) * inv2star,
         "r3 below the admissible ceiling"},
        {(N - b - st) / static_cast<double>(N), "finite r2 in the weighted Hoelder split"},
    };
    for (const auto& c : cand_hi)
        if (c.value < hi.value) hi = c;
    if (hi.value - lo.value <= kBoundaryTol) {
        std::string msg = "empty exponent window in mode " + feas_mode_name(mode) +
                          ": bound '" + lo.what + "' (1/rho > " + fmt_shortest(lo.value) +
                          ") meets bound '" + hi.what + "' (1/rho < " + fmt_shortest(hi.value) +
                          ")";
        // Name the parameter inequality for the two collisions that occur
        // along the classification boundary.
        if (hi.what == "finite r2 in the weighted Hoelder split") {
            if (N >= 3 && lo.what == "2 < rho below the admissible ceiling")
                msg += "; violated: b + s_tilde < N/2 + 1 (b + s_tilde = " +
                       fmt_shortest(b + st) + ")";
            else
                msg += "; violated: b + s_tilde < N (b + s_tilde = " + fmt_shortest(b + st) +
                       ")";
        }
        throw InfeasibleSystem(msg);
    }
    return {lo.value, hi.value, lo.what, hi.what};
}

struct ChainValues {
    double inv_r1, inv_r2, inv_r3, inv_q3;
};

ChainValues chain_at(int N, double b, double alpha, double st, double u) {
    ChainValues c;
    c.inv_r1 = 1.0 - u - b / N;
    c.inv_r3 = (1.0 - u - b / N + alpha * st / N) / (alpha + 1.0);
    c.inv_r2 = c.inv_r3 - st / N;
    c.inv_q3 = N / 4.0 - (N / 2.0) * c.inv_r3;
    return c;
}

// Slack validity: the +/- shifted exponents must remain inside their open
// ranges for the recorded eta to be usable.
bool chain_slack_ok(int N, double st, const ChainValues& c, double u, double eta) {
    double inv2star = (N >= 3) ? (N - 2.0) / (2.0 * N) : 0.0;
    (void)st;
    (void)u;
    if (!(c.inv_r1 - eta / N > 0.0 && c.inv_r1 + eta / N < 1.0)) return false;
    if (!(c.inv_r2 > 0.0 && c.inv_r2 <= 1.0)) return false;
    if (!(c.inv_r3 - eta / N > inv2star && c.inv_r3 + eta / N < 0.5)) return false;
    if (!(c.inv_q3 - eta / 2.0 > 0.0 && c.inv_q3 + eta / 2.0 <= 0.5)) return false;
    return true;
}

FeasibilityCertificate solve_chain(const ProblemParams& p, FeasMode mode, double st,
                                   double theta, double eta0) {
    const int N = p.N;
    UWindow w = chain_window(N, p.b, p.alpha, st, mode);
    double rho_lo = 1.0 / w.hi;
    double rho_hi_raw =
        w.lo > 0.0 ? 1.0 / w.lo : std::numeric_limits<double>::infinity();
    double cap = std::max(4.0 * rho_lo, rho_lo + 8.0);
    bool capped = rho_hi_raw > cap;
    double rho_hi = capped ? cap : rho_hi_raw;

    double eta = eta0;
    for (int shrink = 0; shrink <= kMaxEtaShrinks; ++shrink, eta *= 0.5) {
        double best_margin = -1.0, best_rho = 0.0;
        ChainValues best{};
        for (int k = 1; k <= kGridPoints; ++k) {
            double rho = rho_lo + (rho_hi - rho_lo) * k / (kGridPoints + 1.0);
            ChainValues c = chain_at(N, p.b, p.alpha, st, 1.0 / rho);
            if (!chain_slack_ok(N, st, c, 1.0 / rho, eta)) continue;
            double margin = std::min(rho - rho_lo, rho_hi - rho);
            if (margin > best_margin) {
                best_margin = margin;
                best_rho = rho;
                best = c;
            }
        }
        if (best_margin > 0.0) {
            FeasibilityCertificate cert;
            cert.rho = best_rho;
            cert.r1 = 1.0 / best.inv_r1;
            cert.r2 = 1.0 / best.inv_r2;
            cert.r3 = 1.0 / best.inv_r3;
            cert.q3 = 1.0 / best.inv_q3;
            cert.s_tilde = st;
            cert.theta_sub = theta;
            cert.eta = eta;
            cert.mode = mode;
            cert.window_capped = capped;
            if (mode == FeasMode::Homogeneous) cert.s0 = p.s;
            return cert;
        }
    }
    throw InfeasibleSystem("exponent window in mode " + feas_mode_name(mode) +
                           " admits no point with positive slack");
}

FeasibilityCertificate solve_homogeneous_small_alpha(const ProblemParams& p, double eta0) {
    // Pinned construction: sigma = (1-eta) s, s0 = (1-eta)^2 alpha s,
    // 1/r8 = 1/2 - eta, r5 = rho, which forces
    //   1/rho = (N-2)/(2N) + alpha (s - s_c)/(2N) + alpha eta / 2.
    const int N = p.N;
    const double s = p.s, b = p.b, alpha = p.alpha;
    const double sc = critical_index(p);
    if (N < 2)
        throw InfeasibleSystem(
            "violated: alpha >= 1 required for the homogeneous-datum mode at N = 1 "
            "(alpha = " +
            fmt_shortest(alpha) + ")");
    double eta = eta0;
    for (int shrink = 0; shrink <= kMaxEtaShrinks; ++shrink, eta *= 0.5) {
        double s0 = (1.0 - eta) * (1.0 - eta) * alpha * s;
        double inv_rho = (N - 2.0) / (2.0 * N) + alpha * (s - sc) / (2.0 * N) +
                         alpha * eta / 2.0;
        double win_lo = (N - 2.0) / (2.0 * N);
        double win_hi = (N - 2.0 * (s - s0)) / (2.0 * N);
        // r5 = rho carries +/- slack, so the window must hold with margin.
        bool window_ok =
            inv_rho - eta / N > win_lo && inv_rho + eta / N < win_hi;
        double inv_r8 = 0.5 - eta;
        double chain_piece = 0.5 - eta - s / N;  // 1/[(alpha - s0/sigma) r6]
        double inv_r4 = alpha * (inv_r8 - s / N);
        double sigma = (1.0 - eta) * s;
        double inv_r6 = (alpha - s0 / sigma) * chain_piece;
        double inv_r7 = (s0 / sigma) * (inv_r8 - (s - sigma) / N);
        double inv_r2 = inv_r6 + inv_r7;
        double inv_r3 = inv_rho - s0 / N;
        double inv_r1 = inv_r4 + inv_rho;
        double inv_q3 = N / 4.0 - (N / 2.0) * inv_rho - (s - s0) / 2.0;
        bool chain_ok = chain_piece > 0.0 && inv_r3 > 0.0 && inv_r2 > 0.0 &&
                        inv_r1 - eta / N > 0.0 && inv_r1 + eta / N < 1.0 &&
                        inv_q3 - eta / 2.0 > 0.0 && inv_q3 + eta / 2.0 <= 0.5;
        if (window_ok && chain_ok) {
            FeasibilityCertificate cert;
            cert.rho = 1.0 / inv_rho;
            cert.r1 = 1.0 / inv_r1;
            cert.r2 = 1.0 / inv_r2;
            cert.r3 = 1.0 / inv_r3;
            cert.q3 = 1.0 / inv_q3;
            cert.s_tilde = s;
            cert.theta_sub = 1.0;
            cert.eta = eta;
            cert.mode = FeasMode::Homogeneous;
            cert.s0 = s0;
            return cert;
        }
        if (!chain_ok && window_ok && inv_r3 <= 0.0 && shrink == kMaxEtaShrinks)
            throw InfeasibleSystem(
                "violated: 1/rho > s0/N (Sobolev pairing of the Leibniz split); "
                "the construction fails here for any positive slack (1/rho = " +
                fmt_shortest(inv_rho) + ", s0/N = " + fmt_shortest(s0 / N) + ")");
    }
    throw InfeasibleSystem(
        "homogeneous-datum construction admits no point with positive slack");
}

FeasibilityCertificate solve_critical(const ProblemParams& p, double eta0) {
    const int N = p.N;
    const double b = p.b, alpha = p.alpha;
    const double sc = critical_index(p);
    ExtReal as = alpha_max(N, p.s, b);
    if (as.is_infinite() || std::abs(alpha - as.value()) >= kEqTol)
        throw InfeasibleSystem(
            "violated: alpha at the critical power is required for the critical-datum "
            "mode (alpha = " +
            fmt_shortest(alpha) + ", critical power = " + as.str() + ")");
    if (sc < -kBoundaryTol || sc > 1.0 + kBoundaryTol)
        throw InfeasibleSystem("violated: 0 <= s_c <= 1 (s_c = " + fmt_shortest(sc) + ")");

    double eta = eta0;
    if (std::abs(sc - 1.0) < kEqTol) {
        if (N < 3)
            throw InfeasibleSystem("violated: s_c = 1 requires N >= 3 (N = " + fmt_int(N) +
                                   ")");
        for (int shrink = 0; shrink <= kMaxEtaShrinks; ++shrink, eta *= 0.5) {
            double eps = 10.0 * eta;  // keeps eta << eps at every shrink level
            double inv_r23 = (N - 2.0 - eps) / (2.0 * N);
            double inv_rho =
                (N - 2.0 + (1.0 + (4.0 - 2.0 * b) / (N - 2.0)) * eps) / (2.0 * N);
            double inv_q3 = N / 4.0 - (N / 2.0) * inv_r23 - 0.5;
            bool ok = inv_r23 > 0.0 && inv_rho < 0.5 && inv_q3 - eta / 2.0 > 0.0 &&
                      inv_q3 + eta / 2.0 <= 0.5 && eps < 0.5;
            if (!ok) continue;
            FeasibilityCertificate cert;
            cert.rho = 1.0 / inv_rho;
            cert.r1 = 1.0 / (1.0 - inv_rho - b / N);
            cert.r2 = 1.0 / inv_r23;
            cert.r3 = 1.0 / inv_r23;
            cert.q3 = 1.0 / inv_q3;
            cert.s_tilde = sc;
            cert.theta_sub = 1.0;
            cert.eta = eta;
            cert.mode = FeasMode::Critical;
            cert.eps0 = (1.0 + (2.0 - b) / (2.0 * (N - 2.0))) * eps;
            cert.eps1 = (1.0 + (2.0 - b) / (N - 2.0)) * eps;
            return cert;
        }
        throw InfeasibleSystem("critical-datum endpoint construction admits no valid slack");
    }

    for (int shrink = 0; shrink <= kMaxEtaShrinks; ++shrink, eta *= 0.5) {
        double inv_rho, inv_r2, inv_r3;
        if (N >= 2) {
            inv_rho = (N - 2.0) / (2.0 * N) + alpha * eta / 2.0;
            inv_r2 = (N - 2.0 * sc) / (2.0 * N) - eta;
            inv_r3 = inv_rho;
        } else {
            inv_rho = eta;
            inv_r3 = inv_rho;
            inv_r2 = (1.0 - b - 2.0 * eta) / alpha;
        }
        double inv_q3 = N / 4.0 - (N / 2.0) * inv_r3 - sc / 2.0;
        double inv_r1 = 1.0 - inv_rho - b / N;
        // rho and r3 sit just above the lower edge of the index-s_c range,
        // r2 just above its own; all must remain strictly inside.
        double range_lo = (N - 2.0 * sc) / (2.0 * N);
        bool ok = inv_r2 > 0.0 && inv_r2 < range_lo && inv_r3 < range_lo &&
                  inv_rho < 0.5 && inv_r1 - eta / N > 0.0 && inv_r1 + eta / N < 1.0 &&
                  inv_q3 - eta / 2.0 > 0.0 && inv_q3 + eta / 2.0 <= 0.5;
        if (N >= 3)
            ok = ok && inv_r2 > (N - 2.0) / (2.0 * N) && inv_r3 > (N - 2.0) / (2.0 * N);
        if (!ok) continue;
        FeasibilityCertificate cert;
        cert.rho = 1.0 / inv_rho;
        cert.r1 = 1.0 / inv_r1;
        cert.r2 = 1.0 / inv_r2;
        cert.r3 = 1.0 / inv_r3;
        cert.q3 = 1.0 / inv_q3;
        cert.s_tilde = sc;
        cert.theta_sub = 1.0;
        cert.eta = eta;
        cert.mode = FeasMode::Critical;
        return cert;
    }
    throw InfeasibleSystem("critical-datum construction admits no valid slack");
}

}  // namespace

FeasibilityCertificate strichartz_feasible(const ProblemParams& p, FeasMode mode,
                                           double eta) {
    const double sc = critical_index(p);
    switch (mode) {
        case FeasMode::Inhomogeneous: {
            double st, theta;
            if (p.s < p.N / 2.0) {
                st = p.s;
                theta = 1.0;
            } else {
                // Any s_tilde in (s_c, N/2) works; sitting close to N/2
                // keeps the window wide for every admissible power.
                double delta = std::min(0.1, (p.N / 2.0 - sc) / 2.0);
                st = p.N / 2.0 - delta;
                theta = (st - sc) / (p.s - sc);
            }
            return solve_chain(p, mode, st, theta, eta);
        }
        case FeasMode::Homogeneous: {
            if (sc < -kBoundaryTol)
                throw InfeasibleSystem("violated: 0 <= s_c (s_c = " + fmt_shortest(sc) +
                                       ")");
            if (!(sc < p.s - kBoundaryTol))
                throw InfeasibleSystem(
                    "violated: s_c < s for the homogeneous-datum mode (s_c = " +
                    fmt_shortest(sc) + ", s = " + fmt_shortest(p.s) +
                    "); use the critical-datum mode at s = s_c");
            if (p.s > 1.0 + kBoundaryTol)
                throw InfeasibleSystem("violated: s <= 1 (s = " + fmt_shortest(p.s) + ")");
            if (!(p.s < p.N / 2.0 - kBoundaryTol))
                throw InfeasibleSystem("violated: s < N/2 (s = " + fmt_shortest(p.s) +
                                       ", N = " + fmt_int(p.N) + ")");
            if (p.alpha >= 1.0 - kBoundaryTol)
                return solve_chain(p, mode, p.s, 1.0, eta);
            if (p.N == 1)
                throw InfeasibleSystem(
                    "violated: alpha >= 1 required for the homogeneous-datum mode at "
                    "N = 1 (alpha = " +
                    fmt_shortest(p.alpha) + ")");
            return solve_homogeneous_small_alpha(p, eta);
        }
        case FeasMode::Critical:
            return solve_critical(p, eta);
    }
    throw DomainError("unknown feasibility mode");
}

std::string FeasibilityCertificate::record() const {
    std::map<std::string, std::string> kv;
    kv["mode"] = feas_mode_name(mode);
    kv["rho"] = fmt_shortest(rho);
    kv["r1"] = fmt_shortest(r1);
    kv["r2"] = fmt_shortest(r2);
    kv["r3"] = fmt_shortest(r3);
    kv["q3"] = fmt_shortest(q3);
    kv["s_tilde"] = fmt_shortest(s_tilde);
    kv["theta_sub"] = fmt_shortest(theta_sub);
    kv["eta"] = fmt_shortest(eta);
    kv["window_capped"] = window_capped ? "true(convention)" : "false";
    if (s0) kv["s0"] = fmt_shortest(*s0);
    if (eps0) kv["eps0"] = fmt_shortest(*eps0);
    if (eps1) kv["eps1"] = fmt_shortest(*eps1);
    return kv_lines(kv);
}

double certificate_residual(const ProblemParams& p, const FeasibilityCertificate& c) {
    // Every stored double converts exactly to a rational, so the identity
    // residuals below reflect only the rounding of the stored values.
    const Rat N(p.N), b(p.b), alpha(p.alpha), s(p.s);
    const Rat sc = N / 2 - (Rat(2) - b) / alpha;
    const Rat rho(c.rho), r1(c.r1), r2(c.r2), r3(c.r3), q3(c.q3);
    const Rat st(c.s_tilde), theta(c.theta_sub), eta(c.eta);
    std::vector<Rat> res;

    auto inv = [](const Rat& x) { return Rat(1) / x; };

    if (c.mode == FeasMode::Inhomogeneous ||
        (c.mode == FeasMode::Homogeneous && p.alpha >= 1.0)) {
        res.push_back((Rat(1) - inv(rho)) - (b / N + inv(r1)));
        res.push_back(inv(r1) - (alpha / r2 + inv(r3)));
        res.push_back(inv(r2) - (inv(r3) - st / N));
        res.push_back(Rat(2) / q3 - (N / 2 - N / r3));
        res.push_back(theta * (s - sc) - (st - sc));
        if (c.mode == FeasMode::Homogeneous) res.push_back(Rat(*c.s0) - s);
    } else if (c.mode == FeasMode::Homogeneous) {
        const Rat s0(*c.s0);
        res.push_back((Rat(1) - inv(rho)) - (b / N + inv(r1)));
        res.push_back(inv(r1) - (inv(r2) + inv(r3)));
        res.push_back(inv(r3) - (inv(rho) - s0 / N));
        res.push_back(Rat(2) / q3 - (N / 2 - N / rho - (s - s0)));
        res.push_back(inv(rho) -
                      ((N - 2) / (2 * N) + alpha * (s - sc) / (2 * N) + alpha * eta / 2));
        res.push_back(s0 - (Rat(1) - eta) * (Rat(1) - eta) * alpha * s);
        res.push_back(theta * (s - sc) - (st - sc));
    } else if (c.eps0) {
        // Critical-datum endpoint s_c = 1.
        const Rat eps = Rat(10) * eta;
        res.push_back((Rat(1) - inv(rho)) - (b / N + alpha / r2 + inv(r3)));
        res.push_back(inv(r2) - inv(r3));
        res.push_back(inv(rho) -
                      (N - 2 + (Rat(1) + (Rat(4) - 2 * b) / (N - 2)) * eps) / (2 * N));
        res.push_back(Rat(*c.eps0) - (Rat(1) + (Rat(2) - b) / (2 * (N - 2))) * eps);
        res.push_back(Rat(*c.eps1) - (Rat(1) + (Rat(2) - b) / (N - 2)) * eps);
        res.push_back(Rat(2) / q3 - (N / 2 - N / r3 - sc));
        res.push_back(theta * (s - sc) - (st - sc));
    } else {
        res.push_back((Rat(1) - inv(rho)) - (b / N + alpha / r2 + inv(r3)));
        res.push_back(inv(r3) - inv(rho));
        if (p.N >= 2) {
            res.push_back(inv(rho) - ((N - 2) / (2 * N) + alpha * eta / 2));
            res.push_back(inv(r2) - ((N - 2 * sc) / (2 * N) - eta));
        } else {
            res.push_back(inv(rho) - eta);
            res.push_back(inv(r2) - (Rat(1) - b - 2 * eta) / alpha);
        }
        res.push_back(Rat(2) / q3 - (N / 2 - N / r3 - sc));
        res.push_back(theta * (s - sc) - (st - sc));
    }

    Rat worst(0);
    for (const auto& r : res) {
        Rat a = r < 0 ? Rat(-r) : r;
        if (a > worst) worst = a;
    }
    return worst.convert_to<double>();
}

}  // namespace inls
