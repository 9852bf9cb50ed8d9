#include "inls/norms.hpp"

#include <algorithm>
#include <cmath>

#include "inls/fft.hpp"
#include "inls/kernels.hpp"

namespace inls {

double lp_norm(const Field& f, ExtReal p) {
    if (p.is_infinite()) return kernels::max_abs(f.values);
    double pe = p.value();
    if (!(pe > 0.0)) throw DomainError("Lebesgue exponent must be positive");
    double s = kernels::sum_abs_pow(f.values, pe);
    double h = f.grid.h();
    return std::pow(s, 1.0 / pe) * std::pow(h, f.grid.dim / pe);
}

double sobolev_norm(const Field& f, double sigma, bool homogeneous) {
    Field hat = (f.space == Space::Frequency) ? f : to_frequency(f);
    const Grid& g = hat.grid;
    std::vector<double> w(hat.values.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double fs = g.freq_sq(i);
        w[i] = homogeneous ? std::pow(fs, sigma) : std::pow(1.0 + fs, sigma);
    }
    double s = kernels::weighted_abs_pow(hat.values, w, 2.0);
    return std::sqrt(s * std::pow(g.h(), g.dim));
}

double mixed_norm(const Trajectory& tr, ExtReal q, ExtReal r) {
    if (tr.snapshots.empty()) throw DomainError("mixed norm of an empty trajectory");
    std::size_t n = tr.snapshots.size();
    std::vector<double> a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = lp_norm(tr.snapshots[k], r);
    if (q.is_infinite()) return *std::max_element(a.begin(), a.end());
    double qe = q.value();
    if (!(qe >= 1.0)) throw DomainError("time exponent must be >= 1");
    if (n == 1) return a[0];  // single snapshot counts with time weight 1
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double w;
        if (k == 0)
            w = 0.5 * (tr.times[1] - tr.times[0]);
        else if (k == n - 1)
            w = 0.5 * (tr.times[n - 1] - tr.times[n - 2]);
        else
            w = 0.5 * (tr.times[k + 1] - tr.times[k - 1]);
        acc += w * std::pow(a[k], qe);
    }
    return std::pow(acc, 1.0 / qe);
}

double strichartz_norm(const Trajectory& tr,
                       const std::vector<std::pair<ExtReal, ExtReal>>& pairs) {
    if (pairs.empty()) throw DomainError("no exponent pairs supplied");
    double best = 0.0;
    for (const auto& [q, r] : pairs) best = std::max(best, mixed_norm(tr, q, r));
    return best;
}

}  // namespace inls
