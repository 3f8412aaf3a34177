#pragma once

#include <stdexcept>

#include "clab/errors.hpp"

namespace clab::hilbert {

// Uniform 1-D grid on [z_min, z_max], n_points nodes inclusive of both ends.
struct Grid {
    double z_min = -1.0;
    double z_max = 1.0;
    int n_points = 16;

    Grid() = default;
    Grid(double lo, double hi, int n) : z_min(lo), z_max(hi), n_points(n) {
        if (!(z_min < z_max)) throw ConfigError("grid: z_min must be < z_max");
        if (n_points < 16) throw ConfigError("grid: n_points must be >= 16");
    }

    double dz() const { return (z_max - z_min) / (n_points - 1); }
    double node(int k) const { return z_min + k * dz(); }

    static Grid centered(double half_span, int n) { return Grid(-half_span, half_span, n); }

    bool operator==(const Grid& o) const {
        return z_min == o.z_min && z_max == o.z_max && n_points == o.n_points;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

} // namespace clab::hilbert
