#pragma once

#include <span>

namespace inls {

// Slope of the least-squares line through (x_k, y_k); needs >= 2 samples
// with non-constant x.
double fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace inls
