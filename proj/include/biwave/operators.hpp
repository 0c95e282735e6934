#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "biwave/grid.hpp"

// Discrete differential operators shared by the evolution, density and
// propagator layers. All matrices are real; boundary handling follows the
// grid (periodic wrap vs. Dirichlet ghost zeros).

namespace biwave {

enum class DerivativeKind { spectral, centered };

// Second difference (psi_{k+1} - 2 psi_k + psi_{k-1}) / dx^2.
inline Eigen::MatrixXd second_difference(const SpatialGrid& g) {
    const int n = g.n_points;
    const double c = 1.0 / (g.dx * g.dx);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        d(k, k) = -2.0 * c;
        if (k + 1 < n) d(k, k + 1) = c;
        if (k - 1 >= 0) d(k, k - 1) = c;
    }
    if (g.periodic()) {
        d(0, n - 1) = c;
        d(n - 1, 0) = c;
    }
    return d;
}

// Centered first difference (psi_{k+1} - psi_{k-1}) / (2 dx); antisymmetric.
inline Eigen::MatrixXd centered_difference(const SpatialGrid& g) {
    const int n = g.n_points;
    const double c = 1.0 / (2.0 * g.dx);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        if (k + 1 < n) d(k, k + 1) = c;
        if (k - 1 >= 0) d(k, k - 1) = -c;
    }
    if (g.periodic()) {
        d(0, n - 1) = -c;
        d(n - 1, 0) = c;
    }
    return d;
}

// One-sided difference (psi_{k+1} - psi_k) / dx. Satisfies G^T G = -D2
// exactly for both boundary kinds, which is what makes gradient-product
// quadratures telescope to the Hamiltonian sandwich.
inline Eigen::MatrixXd forward_difference(const SpatialGrid& g) {
    const int n = g.n_points;
    const double c = 1.0 / g.dx;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        d(k, k) = -c;
        if (k + 1 < n) d(k, k + 1) = c;
    }
    if (g.periodic()) d(n - 1, 0) = c;
    return d;
}

// Trigonometric-interpolation derivative on a periodic grid. Exact (to
// rounding) on every representable plane-wave mode |m| < n/2; the Nyquist
// mode maps to zero. Real and antisymmetric.
inline Eigen::MatrixXd spectral_difference(const SpatialGrid& g) {
    if (!g.periodic())
        throw NonPeriodicGrid("spectral derivative needs a periodic grid");
    const int n = g.n_points;
    const double pi = std::numbers::pi;
    const double scale = pi / g.length();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    const bool even = (n % 2 == 0);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            const int m = j - k;
            const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
            const double arg = pi * m / n;
            d(j, k) = even ? sgn * scale / std::tan(arg)
                           : sgn * scale / std::sin(arg);
        }
    }
    return d;
}

inline Eigen::MatrixXd derivative_matrix(const SpatialGrid& g, DerivativeKind kind) {
    if (kind == DerivativeKind::spectral && g.periodic())
        return spectral_difference(g);
    return centered_difference(g);
}

// H = -(1/2m) D2 + diag(V), real symmetric.
inline Eigen::MatrixXd hamiltonian(const SpatialGrid& g, const Eigen::VectorXd& potential,
                                   double mass = 1.0) {
    if (potential.size() != g.n_points)
        throw GridMismatch("potential sample count does not match grid");
    Eigen::MatrixXd h = -0.5 / mass * second_difference(g);
    h.diagonal() += potential;
    return h;
}

} // namespace biwave
