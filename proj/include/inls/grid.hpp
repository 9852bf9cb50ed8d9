#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "inls/errors.hpp"
#include "inls/numfmt.hpp"

namespace inls {

// Uniform periodic grid on [-L, L)^dim with M points per axis (M a power
// of two). Physical nodes are x_j = -L + j h with h = 2L/M; frequency
// nodes are xi_m = (pi/L) m with integer m in the wraparound order
// m = 0, 1, ..., M/2-1, -M/2, ..., -1 along each axis.
struct Grid {
    int dim = 1;
    int M = 64;
    double L = 16.0;

    Grid() = default;
    Grid(int dim_, int M_, double L_) : dim(dim_), M(M_), L(L_) {
        if (dim < 1 || dim > 3)
            throw DomainError("grid dimension must be 1, 2 or 3, got " + fmt_int(dim));
        if (M < 2 || (M & (M - 1)) != 0)
            throw DomainError("points per axis must be a power of two >= 2, got " +
                              fmt_int(M));
        if (!(L > 0.0)) throw DomainError("half length must be positive");
    }

    double h() const { return 2.0 * L / M; }
    std::size_t size() const {
        std::size_t n = 1;
        for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(M);
        return n;
    }
    double coord(int j) const { return -L + j * h(); }
    // Signed integer mode for axis index k in [0, M).
    int mode(int k) const { return k < M / 2 ? k : k - M; }
    double freq(int k) const { return M_PI / L * mode(k); }

    // Row-major decomposition of a flat index into per-axis indices.
    std::array<int, 3> unflatten(std::size_t idx) const {
        std::array<int, 3> j{0, 0, 0};
        for (int d = dim - 1; d >= 0; --d) {
            j[d] = static_cast<int>(idx % M);
            idx /= M;
        }
        return j;
    }
    std::size_t flatten(const std::array<int, 3>& j) const {
        std::size_t idx = 0;
        for (int d = 0; d < dim; ++d) idx = idx * M + j[d];
        return idx;
    }

    // |xi|^2 for the mode at flat index idx.
    double freq_sq(std::size_t idx) const {
        auto j = unflatten(idx);
        double s = 0.0;
        for (int d = 0; d < dim; ++d) {
            double f = freq(j[d]);
            s += f * f;
        }
        return s;
    }
    // |x|^2 for the node at flat index idx.
    double coord_sq(std::size_t idx) const {
        auto j = unflatten(idx);
        double s = 0.0;
        for (int d = 0; d < dim; ++d) {
            double c = coord(j[d]);
            s += c * c;
        }
        return s;
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.dim == b.dim && a.M == b.M && a.L == b.L;
    }
};

}  // namespace inls
