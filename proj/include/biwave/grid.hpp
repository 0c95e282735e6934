#pragma once

#include <Eigen/Dense>
#include <string>

#include "biwave/errors.hpp"

namespace biwave {

enum class Boundary { periodic, hard_wall };

inline std::string to_string(Boundary b) {
    return b == Boundary::periodic ? "periodic" : "hard_wall";
}

inline Boundary boundary_from_string(const std::string& s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "hard_wall") return Boundary::hard_wall;
    throw ConfigError("unknown boundary kind: " + s);
}

// Uniform 1-D grid in natural units (hbar = m = 1). Point k sits at
// origin + k*dx; a periodic grid wraps after n_points cells (length
// n_points*dx), a hard-wall grid imposes psi = 0 one cell outside both ends.
struct SpatialGrid {
    int n_points = 0;
    double dx = 0.0;
    double origin = 0.0;
    Boundary boundary = Boundary::periodic;

    SpatialGrid() = default;
    SpatialGrid(int n, double spacing, double left, Boundary b)
        : n_points(n), dx(spacing), origin(left), boundary(b) {
        if (n_points < 8) throw ConfigError("grid needs at least 8 points");
        if (!(dx > 0.0)) throw ConfigError("grid spacing must be positive");
    }

    double coordinate(int k) const { return origin + k * dx; }
    double length() const { return n_points * dx; }
    bool periodic() const { return boundary == Boundary::periodic; }

    Eigen::VectorXd coordinates() const {
        Eigen::VectorXd x(n_points);
        for (int k = 0; k < n_points; ++k) x[k] = coordinate(k);
        return x;
    }

    // Quadrature weights: plain Riemann sum on periodic grids (every point
    // covers one full cell), trapezoid on hard-wall grids.
    double weight(int k) const {
        if (periodic()) return 1.0;
        return (k == 0 || k == n_points - 1) ? 0.5 : 1.0;
    }
    Eigen::VectorXd weights() const {
        Eigen::VectorXd w = Eigen::VectorXd::Ones(n_points);
        if (!periodic()) {
            w[0] = 0.5;
            w[n_points - 1] = 0.5;
        }
        return w;
    }

    bool operator==(const SpatialGrid& o) const {
        return n_points == o.n_points && dx == o.dx && origin == o.origin &&
               boundary == o.boundary;
    }
    bool operator!=(const SpatialGrid& o) const { return !(*this == o); }
};

inline void require_same_grid(const SpatialGrid& a, const SpatialGrid& b) {
    if (a != b) throw GridMismatch("fields live on different grids");
}

} // namespace biwave
