#include "inls/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace inls {

namespace {
ExecMode g_mode = ExecMode::Parallel;
// Reduction block size. Partial sums are computed per block and combined
// serially in block order, so totals do not depend on the thread count.
constexpr std::size_t kBlock = 4096;
}  // namespace

void set_exec_mode(ExecMode m) { g_mode = m; }
ExecMode exec_mode() { return g_mode; }

namespace kernels {

namespace {

template <class F>
void for_each_index(std::size_t n, F&& f) {
    if (g_mode == ExecMode::Serial) {
        for (std::size_t i = 0; i < n; ++i) f(i);
    } else {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            f(static_cast<std::size_t>(i));
    }
}

// Deterministic reduction: per-block partials (parallel across blocks),
// combined left to right.
template <class F>
double reduce_blocks(std::size_t n, F&& block_sum) {
    std::size_t nblocks = (n + kBlock - 1) / kBlock;
    if (nblocks == 0) return 0.0;
    std::vector<double> partial(nblocks, 0.0);
    if (g_mode == ExecMode::Serial) {
        for (std::size_t b = 0; b < nblocks; ++b)
            partial[b] = block_sum(b * kBlock, std::min(n, (b + 1) * kBlock));
    } else {
#pragma omp parallel for schedule(static)
        for (long long bi = 0; bi < static_cast<long long>(nblocks); ++bi) {
            auto b = static_cast<std::size_t>(bi);
            partial[b] = block_sum(b * kBlock, std::min(n, (b + 1) * kBlock));
        }
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double abs_pow(const cplx& z, double p) {
    double a = std::abs(z);
    if (p == 2.0) return a * a;
    if (p == 1.0) return a;
    if (a == 0.0) return 0.0;
    return std::pow(a, p);
}

}  // namespace

void multiply(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
    for_each_index(out.size(), [&](std::size_t i) { out[i] = a[i] * b[i]; });
}

void multiply_real(std::span<cplx> v, std::span<const double> m) {
    for_each_index(v.size(), [&](std::size_t i) { v[i] *= m[i]; });
}

void axpy(std::span<cplx> acc, cplx w, std::span<const cplx> x) {
    for_each_index(acc.size(), [&](std::size_t i) { acc[i] += w * x[i]; });
}

void scale(std::span<cplx> v, cplx w) {
    for_each_index(v.size(), [&](std::size_t i) { v[i] *= w; });
}

void power_nonlinearity(std::span<const cplx> u, double alpha, std::span<cplx> out) {
    for_each_index(u.size(), [&](std::size_t i) {
        double a = std::abs(u[i]);
        out[i] = (a == 0.0 ? cplx(0.0) : std::pow(a, alpha) * u[i]);
    });
}

void phase_nonlinearity(std::span<cplx> u, std::span<const double> w, double alpha,
                        double c) {
    for_each_index(u.size(), [&](std::size_t i) {
        double a = std::abs(u[i]);
        double phase = (a == 0.0 && alpha > 0.0) ? 0.0 : c * w[i] * std::pow(a, alpha);
        u[i] *= cplx(std::cos(phase), std::sin(phase));
    });
}

double sum_abs_pow(std::span<const cplx> v, double p) {
    return reduce_blocks(v.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += abs_pow(v[i], p);
        return s;
    });
}

double max_abs(std::span<const cplx> v) {
    // max is order-independent, so a plain parallel reduction is already
    // deterministic.
    double m = 0.0;
    if (g_mode == ExecMode::Serial) {
        for (const auto& z : v) m = std::max(m, std::abs(z));
    } else {
#pragma omp parallel for reduction(max : m) schedule(static)
        for (long long i = 0; i < static_cast<long long>(v.size()); ++i)
            m = std::max(m, std::abs(v[i]));
    }
    return m;
}

double weighted_abs_pow(std::span<const cplx> v, std::span<const double> w, double p) {
    return reduce_blocks(v.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += w[i] * abs_pow(v[i], p);
        return s;
    });
}

double diff_sq(std::span<const cplx> a, std::span<const cplx> b) {
    return reduce_blocks(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            cplx d = a[i] - b[i];
            s += std::norm(d);
        }
        return s;
    });
}

}  // namespace kernels

}  // namespace inls
