#include "inls/propagator.hpp"

#include <cmath>

#include "inls/fft.hpp"
#include "inls/norms.hpp"

namespace inls {

namespace {
constexpr double kPoleTol = 1e-9;
}

Field free_evolve(const Field& f, double t) {
    if (f.space != Space::Physical)
        throw DomainError("free evolution expects a physical-space field");
    return apply_symbol(f, [t](double fs) { return std::exp(cplx(0.0, -t * fs)); });
}

cplx gaussian_nonlinearity_at_origin(double t, int N, double alpha) {
    if (!(t >= 0.0)) throw DomainError("time must be >= 0");
    cplx denom(1.0, 4.0 * M_PI * t);
    return 1.0 / (std::pow(std::abs(denom), N * alpha / 2.0) * std::pow(denom, N / 2.0));
}

cplx weight_evolution(double t, double x_abs, double lambda, int N, bool alt_arg) {
    if (!(t > 0.0)) throw DomainError("weight evolution needs t > 0");
    if (!(x_abs >= 0.0)) throw DomainError("radius must be >= 0");
    if (!(lambda > 0.0) || !(lambda < N + 2.0))
        throw DomainError("weight exponent must lie in (0, dim + 2)");
    if (std::abs(lambda - N) <= kPoleTol || std::abs(lambda - (N + 1.0)) <= kPoleTol)
        throw PoleError("weight exponent on a pole (dim or dim + 1)");

    double theta = 0.5 * lambda;
    double beta = 0.5 * (N - lambda);
    double y = x_abs * x_abs / (4.0 * t);
    cplx fourit(0.0, 4.0 * t);
    cplx front = std::pow(fourit, -0.5 * lambda) / std::tgamma(0.5 * lambda);

    if (lambda < N) return front * h_function(y, theta, beta).value;

    if (lambda > std::max(static_cast<double>(N), 2.0)) {
        // Analytic extension through the divergent endpoint: both H values
        // exist directly because the second exponent is shifted up by one.
        double ya = alt_arg ? x_abs * x_abs / t : y;
        cplx comb = (theta - 1.0) * h_function(ya, theta - 1.0, beta + 1.0).value +
                    cplx(0.0, ya) * h_function(ya, theta, beta + 1.0).value;
        return front * comb / beta;
    }

    // Remaining gap: dim 1 with lambda in (1, 2); the continued integral
    // covers it (second exponent in (-1/2, 0)).
    return front * h_function_continued(y, theta, beta).value;
}

double strichartz_ratio(const Field& u0, const AdmissiblePair& pair, double T,
                        int n_times) {
    if (n_times < 2) throw DomainError("need at least two snapshot times");
    if (!(T > 0.0)) throw DomainError("time horizon must be positive");
    Trajectory tr{u0.grid, {}, {}, {}};
    for (int k = 0; k < n_times; ++k) {
        double t = T * k / (n_times - 1.0);
        tr.push(t, free_evolve(u0, t));
    }
    double num = mixed_norm(tr, pair.q, pair.r);
    double den = sobolev_norm(u0, pair.s, true);
    return num / den;
}

}  // namespace inls
