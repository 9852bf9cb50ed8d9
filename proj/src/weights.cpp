#include "inls/weights.hpp"

#include <cmath>

#include "inls/fft.hpp"
#include "inls/quadrature.hpp"

namespace inls {

namespace {

constexpr double kIntTol = 1e-9;  // pole guard: distance to an integer

bool near_nonneg_integer(double x) {
    if (x < -kIntTol) return false;
    return std::abs(x - std::round(x)) <= kIntTol;
}

}  // namespace

double origin_cell_average(int dim, double b, double h) {
    if (!(b > 0.0) || !(b < dim)) throw DomainError("weight exponent must be in (0, dim)");
    switch (dim) {
        case 1:
            // (1/h) * 2 * integral_0^{h/2} x^{-b} dx
            return std::pow(0.5 * h, -b) / (1.0 - b);
        case 2: {
            // Octant reduction with the radial integral done exactly:
            // average = h^{-b} * 2^{b+1}/(2-b) * integral_0^{pi/4} cos(phi)^{b-2} dphi.
            QuadRule r = gauss_legendre_ab(48, 0.0, M_PI / 4.0);
            double ang = 0.0;
            for (std::size_t i = 0; i < r.nodes.size(); ++i)
                ang += r.weights[i] * std::pow(std::cos(r.nodes[i]), b - 2.0);
            return std::pow(h, -b) * std::pow(2.0, b + 1.0) / (2.0 - b) * ang;
        }
        case 3: {
            // Radial integral exact, remainder projected onto the cube face:
            // average = h^{-b} * 3/(3-b) * integral_{[-1/2,1/2]^2} (x^2+y^2+1/4)^{-b/2}.
            QuadRule r = gauss_legendre_ab(48, -0.5, 0.5);
            double face = 0.0;
            for (std::size_t i = 0; i < r.nodes.size(); ++i)
                for (std::size_t j = 0; j < r.nodes.size(); ++j) {
                    double q = r.nodes[i] * r.nodes[i] + r.nodes[j] * r.nodes[j] + 0.25;
                    face += r.weights[i] * r.weights[j] * std::pow(q, -0.5 * b);
                }
            return std::pow(h, -b) * 3.0 / (3.0 - b) * face;
        }
        default:
            throw DomainError("cell average defined for dimensions 1..3");
    }
}

Field eval_weight(const Grid& g, double b, double epsilon) {
    if (!(b >= 0.0) || !(b < g.dim))
        throw DomainError("weight exponent must be in [0, dim) for local integrability");
    if (!(epsilon >= 0.0)) throw DomainError("regularization length must be >= 0");
    Field w(g, Space::Physical);
    double e2 = epsilon * epsilon;
    for (std::size_t i = 0; i < w.values.size(); ++i) {
        double r2 = g.coord_sq(i) + e2;
        w.values[i] = (r2 == 0.0) ? cplx(origin_cell_average(g.dim, b, g.h()), 0.0)
                                  : cplx(std::pow(r2, -0.5 * b), 0.0);
    }
    return w;
}

RieszConstant riesz_constant(int N, double b, double s) {
    if (N < 1) throw DomainError("dimension must be positive");
    if (!(b > 0.0) || !(b < N)) throw DomainError("weight exponent must be in (0, dim)");
    if (!(s >= 0.0)) throw DomainError("derivative order must be >= 0");
    if (near_nonneg_integer(b + s - N))
        throw PoleError("b + s - dim on a nonnegative integer is a pole");
    double lg = s * std::log(2.0) + std::lgamma(0.5 * (b + s)) +
                std::lgamma(0.5 * (N - b)) - std::lgamma(0.5 * b);
    // The remaining factor 1/Gamma((N-b-s)/2) can hit negative arguments
    // once b+s exceeds dim; go through tgamma there to keep the sign.
    double tail = 0.5 * (N - b - s);
    double value;
    if (tail > 0.0)
        value = std::exp(lg - std::lgamma(tail));
    else
        value = std::exp(lg) / std::tgamma(tail);
    return {N, b, s, cplx(value, 0.0), b + s >= N};
}

double verify_hormander(const Grid& g, double b, double s, double r_in, double r_out) {
    if (!(0.0 < r_in && r_in < r_out && r_out < g.L))
        throw DomainError("annulus must satisfy 0 < r_in < r_out < L");
    RieszConstant c = riesz_constant(g.dim, b, s);
    // The limiting weight (cell-averaged at the origin) keeps the s = 0
    // identity exact; any positive regularization length would already
    // perturb the quotient at second order.
    Field w = eval_weight(g, b, 0.0);
    Field d = fractional_derivative(w, s);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        double r2 = g.coord_sq(i);
        if (r2 >= r_in * r_in && r2 <= r_out * r_out) idx.push_back(i);
    }
    if (idx.empty()) throw DomainError("annulus contains no grid points");
    // On the torus the derivative is only defined up to its zero mode, so
    // the grid result differs from the whole-space identity by a single
    // additive constant. Remove that constant before forming the quotient;
    // the power profile still varies across the annulus, so a wrong
    // constant cannot hide behind the subtraction.
    cplx offset = 0.0;
    for (std::size_t i : idx)
        offset += d.values[i] - c.value * std::pow(g.coord_sq(i), -0.5 * (b + s));
    offset /= static_cast<double>(idx.size());
    double worst = 0.0;
    for (std::size_t i : idx) {
        cplx quotient = (d.values[i] - offset) * std::pow(g.coord_sq(i), 0.5 * (b + s));
        worst = std::max(worst, std::abs(quotient - c.value) / std::abs(c.value));
    }
    return worst;
}

}  // namespace inls
