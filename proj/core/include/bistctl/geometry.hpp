#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bistctl/errors.hpp"

// Shared spatial value types: geometry selector, uniform grid, and a
// time-stamped nodal field. These are plain immutable-by-convention structs
// used across the propagule, control, solver and analysis modules.

namespace bistctl {

// Spatial setting of a problem. Two modes are supported:
//  - cartesian1d: the line, coordinates in [x_min, x_max];
//  - radial: radially symmetric profiles in d dimensions, coordinate r >= 0.
// The dimension d enters the radius formula exponents, the radial Laplacian
// and the r^{d-1} volume weights; in cartesian mode it is fixed to 1.
struct Geometry {
    enum class Mode { cartesian1d, radial };

    Mode mode = Mode::cartesian1d;
    int dim = 1;

    static Geometry cartesian() { return Geometry{Mode::cartesian1d, 1}; }

    static Geometry radial(int dim) {
        if (dim < 1)
            throw InvalidParams("Geometry: radial dimension must be >= 1, got " +
                                std::to_string(dim));
        return Geometry{Mode::radial, dim};
    }

    bool is_radial() const { return mode == Mode::radial; }
};

// Uniform one-dimensional grid with n nodes, x_i = x_min + i*h.
// In radial mode x_min must be 0 (checked by the solver entry points).
struct Grid {
    double x_min = 0.0;
    double x_max = 1.0;
    int n = 2;

    Grid() = default;
    Grid(double x_min_, double x_max_, int n_) : x_min(x_min_), x_max(x_max_), n(n_) {
        if (n < 3)
            throw InvalidParams("Grid: need at least 3 nodes, got " + std::to_string(n));
        if (!(x_max > x_min))
            throw InvalidParams("Grid: x_max must exceed x_min");
    }

    // Grid whose spacing is (as close as representable to) the requested h.
    static Grid with_spacing(double x_min, double x_max, double h) {
        if (!(h > 0.0))
            throw InvalidParams("Grid: spacing h must be positive");
        const int n = static_cast<int>(std::round((x_max - x_min) / h)) + 1;
        return Grid(x_min, x_max, n);
    }

    double h() const { return (x_max - x_min) / (n - 1); }
    double node(int i) const { return x_min + i * h(); }
    double length() const { return x_max - x_min; }
};

// One snapshot of the discretized proportion profile u(t, .): one value per
// grid node, all in [0,1], plus the simulation time it was taken at.
struct Field {
    std::vector<double> values;
    double time = 0.0;
};

} // namespace bistctl
