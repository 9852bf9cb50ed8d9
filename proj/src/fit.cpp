#include "inls/fit.hpp"

#include <cstddef>

#include "inls/errors.hpp"

namespace inls {

double fit_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("slope fit needs two equal-length samples or more");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    double denom = n * sxx - sx * sx;
    if (denom <= 0.0) throw DomainError("slope fit needs non-constant abscissae");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace inls
