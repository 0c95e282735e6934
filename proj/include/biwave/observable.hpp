#pragma once

#include <Eigen/Dense>
#include <string>

#include "biwave/operators.hpp"

namespace biwave {

// Observable whose density field is evaluated. Every kind lowers to a dense
// matrix on a given grid; the momentum/current gradient flavor is selectable
// (spectral on periodic grids by default, centered difference otherwise).
struct ObservableSpec {
    enum class Kind { mass, charge, momentum, energy, current, custom };
    enum class MomentumForm { symmetrized, plain };

    Kind kind = Kind::mass;
    double m = 1.0;                        // mass-density scalar
    double e = 1.0;                        // charge scalar (charge/current)
    double kinetic_mass = 1.0;             // 1/(2m) factor of the energy kind
    DerivativeKind derivative = DerivativeKind::spectral;
    MomentumForm momentum_form = MomentumForm::symmetrized;
    Eigen::VectorXd potential;             // energy kind; empty means free
    Eigen::MatrixXcd custom_matrix;        // custom kind

    static ObservableSpec mass(double value = 1.0) {
        if (!(value > 0.0)) throw ConfigError("mass scalar must be positive");
        ObservableSpec o;
        o.kind = Kind::mass;
        o.m = value;
        return o;
    }
    static ObservableSpec charge(double value = 1.0) {
        ObservableSpec o;
        o.kind = Kind::charge;
        o.e = value;
        return o;
    }
    static ObservableSpec momentum(DerivativeKind d = DerivativeKind::spectral,
                                   MomentumForm form = MomentumForm::symmetrized) {
        ObservableSpec o;
        o.kind = Kind::momentum;
        o.derivative = d;
        o.momentum_form = form;
        return o;
    }
    static ObservableSpec energy(Eigen::VectorXd v = {}, double mass_value = 1.0) {
        ObservableSpec o;
        o.kind = Kind::energy;
        o.potential = std::move(v);
        o.kinetic_mass = mass_value;
        return o;
    }
    static ObservableSpec current(double charge_value = 1.0, double mass_value = 1.0,
                                  DerivativeKind d = DerivativeKind::spectral) {
        if (!(mass_value > 0.0)) throw ConfigError("mass scalar must be positive");
        ObservableSpec o;
        o.kind = Kind::current;
        o.e = charge_value;
        o.m = mass_value;
        o.derivative = d;
        return o;
    }
    static ObservableSpec custom(Eigen::MatrixXcd matrix) {
        if (!matrix.allFinite()) throw Error("custom observable matrix is not finite");
        ObservableSpec o;
        o.kind = Kind::custom;
        o.custom_matrix = std::move(matrix);
        return o;
    }

    std::string label() const {
        switch (kind) {
            case Kind::mass: return "mass";
            case Kind::charge: return "charge";
            case Kind::momentum: return "momentum";
            case Kind::energy: return "energy";
            case Kind::current: return "current";
            default: return "custom";
        }
    }

    Eigen::VectorXd potential_on(const SpatialGrid& g) const {
        if (potential.size() == 0) return Eigen::VectorXd::Zero(g.n_points);
        if (potential.size() != g.n_points)
            throw GridMismatch("observable potential does not match grid");
        return potential;
    }

    // Dense matrix representation on a grid; totals of the pointwise density
    // expressions reduce to <psi_f| M |psi_i> / A against this matrix.
    Eigen::MatrixXcd matrix(const SpatialGrid& g) const {
        const int n = g.n_points;
        switch (kind) {
            case Kind::mass:
                return m * Eigen::MatrixXcd::Identity(n, n);
            case Kind::charge:
                return e * Eigen::MatrixXcd::Identity(n, n);
            case Kind::momentum:
                return cx(0.0, -1.0) * derivative_matrix(g, derivative);
            case Kind::current:
                return (e / m) * cx(0.0, -1.0) * derivative_matrix(g, derivative);
            case Kind::energy:
                return hamiltonian(g, potential_on(g), kinetic_mass)
                    .cast<cx>();
            default:
                if (custom_matrix.rows() != n || custom_matrix.cols() != n)
                    throw GridMismatch("custom observable matrix does not match grid");
                return custom_matrix;
        }
    }
};

} // namespace biwave
