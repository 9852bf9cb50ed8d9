#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "inls/exponents.hpp"
#include "inls/grid.hpp"

namespace inls {

using cplx = std::complex<double>;

enum class Space { Physical, Frequency };

// A complex scalar field on a grid, tagged with the space its values live
// in. Values are row-major over the axes.
struct Field {
    Grid grid;
    Space space = Space::Physical;
    std::vector<cplx> values;

    Field() = default;
    Field(const Grid& g, Space sp) : grid(g), space(sp), values(g.size(), cplx(0.0)) {}
};

// Samples a function of the physical coordinates; unused components of the
// coordinate array are zero.
Field sample_physical(const Grid& g,
                      const std::function<cplx(const std::array<double, 3>&)>& f);

// Time-ordered list of snapshots of one solution. The integrator sets
// blew_up when a run ends by exceeding the norm cap or by step collapse
// rather than by reaching its final time.
struct Trajectory {
    Grid grid;
    std::vector<double> times;
    std::vector<Field> snapshots;
    // Step size the integrator was using when each snapshot was captured
    // (zero for the initial datum).
    std::vector<double> step_sizes;
    ProblemParams params;
    bool blew_up = false;

    void push(double t, Field f, double dt = 0.0) {
        if (!times.empty() && !(t > times.back()))
            throw DomainError("trajectory times must be strictly increasing");
        times.push_back(t);
        snapshots.push_back(std::move(f));
        step_sizes.push_back(dt);
    }
};

}  // namespace inls
