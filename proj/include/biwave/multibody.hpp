#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "biwave/density.hpp"
#include "biwave/evolution.hpp"

// Two- and three-particle densities on the shared single-particle grid:
// per-particle marginals for distinguishable pairs, the factor-n identical
// particle density, and (anti)symmetrized state construction. Every emitted
// density lives on the single-particle grid even though the inputs live on
// the n-fold configuration grid.

namespace biwave {

inline cx amplitude2(const TwoParticleField& psi_f2, const TwoParticleField& psi_i2) {
    return inner_product(psi_f2, psi_i2);
}

struct TwoParticleDensityInput {
    TwoParticleField psi_i2;
    TwoParticleField psi_f2;
    ObservableSpec observable;
};

inline double amplitude_floor(const TwoParticleField& f, const TwoParticleField& i) {
    return 1e-10 * norm(f) * norm(i);
}

namespace detail {

// Pointwise density along the row coordinate of a configuration-space block
// (columns are spectator samples). Uses the same per-observable pointwise
// forms as the single-particle module, so marginals of product states
// reproduce single-particle densities exactly.
inline Eigen::MatrixXcd pointwise_density_rows(const ObservableSpec& obs,
                                               const SpatialGrid& g,
                                               const Eigen::MatrixXcd& f,
                                               const Eigen::MatrixXcd& i) {
    const long rows = f.rows(), cols = f.cols();
    Eigen::MatrixXcd q(rows, cols);
    switch (obs.kind) {
        case ObservableSpec::Kind::mass:
            return obs.m * f.conjugate().cwiseProduct(i);
        case ObservableSpec::Kind::charge:
            return obs.e * f.conjugate().cwiseProduct(i);
        case ObservableSpec::Kind::momentum:
        case ObservableSpec::Kind::current: {
            const Eigen::MatrixXd d = derivative_matrix(g, obs.derivative);
            const Eigen::MatrixXcd di = d * i;
            if (obs.momentum_form == ObservableSpec::MomentumForm::plain) {
                q = cx(0.0, -1.0) * f.conjugate().cwiseProduct(di);
            } else {
                const Eigen::MatrixXcd df = d * f;
                q = cx(0.0, -0.5) * (f.conjugate().cwiseProduct(di) -
                                     df.conjugate().cwiseProduct(i));
            }
            if (obs.kind == ObservableSpec::Kind::current) q *= obs.e / obs.m;
            return q;
        }
        case ObservableSpec::Kind::energy: {
            const Eigen::MatrixXd grad = forward_difference(g);
            const Eigen::MatrixXcd gi = grad * i;
            const Eigen::MatrixXcd gf = grad * f;
            const Eigen::VectorXd v = obs.potential_on(g);
            q = (0.5 / obs.kinetic_mass) * gf.conjugate().cwiseProduct(gi);
            for (long r = 0; r < rows; ++r)
                for (long c = 0; c < cols; ++c)
                    q(r, c) += v[r] * std::conj(f(r, c)) * i(r, c);
            return q;
        }
        default:
            return f.conjugate().cwiseProduct(Eigen::MatrixXcd(obs.matrix(g) * i));
    }
}

inline void check_pair(const TwoParticleField& f, const TwoParticleField& i) {
    require_same_grid(f.grid, i.grid);
    if (std::abs(f.time - i.time) > time_tag_tol)
        throw TimeMismatch("two-particle fields carry different time tags");
}

} // namespace detail

// Marginal density of one particle of a distinguishable pair (symmetry flag
// none); the other coordinate is integrated out by quadrature.
inline DensityField density_particle(int which, const TwoParticleField& psi_f2,
                                     const TwoParticleField& psi_i2,
                                     const ObservableSpec& obs) {
    detail::check_pair(psi_f2, psi_i2);
    if (psi_f2.symmetry != Symmetry::none || psi_i2.symmetry != Symmetry::none)
        throw SymmetryModeMismatch("per-particle densities exist only for distinguishable pairs");
    if (which != 1 && which != 2) throw ConfigError("particle index must be 1 or 2");

    const SpatialGrid& g = psi_i2.grid;
    const cx a = amplitude2(psi_f2, psi_i2);
    require_amplitude(a, amplitude_floor(psi_f2, psi_i2));

    const int axis = which - 1;
    const Eigen::MatrixXcd f_block =
        axis == 0 ? psi_f2.values : Eigen::MatrixXcd(psi_f2.values.transpose());
    const Eigen::MatrixXcd i_block =
        axis == 0 ? psi_i2.values : Eigen::MatrixXcd(psi_i2.values.transpose());
    const Eigen::MatrixXcd q = detail::pointwise_density_rows(obs, g, f_block, i_block);
    const Eigen::VectorXd w = g.weights();

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(g.n_points);
    for (int x = 0; x < g.n_points; ++x) {
        cx acc = 0.0;
        for (int o = 0; o < g.n_points; ++o) acc += q(x, o) * w[o];
        out[x] = acc * g.dx / a;
    }
    return DensityField{g, std::move(out), obs, psi_i2.time, a};
}

inline DensityField density_total_distinguishable(const TwoParticleField& psi_f2,
                                                  const TwoParticleField& psi_i2,
                                                  const ObservableSpec& obs) {
    DensityField d1 = density_particle(1, psi_f2, psi_i2, obs);
    const DensityField d2 = density_particle(2, psi_f2, psi_i2, obs);
    d1.values += d2.values;
    return d1;
}

// Overall density for two identical particles: 2/A times the single marginal.
inline DensityField density_identical(const TwoParticleField& psi_f2,
                                      const TwoParticleField& psi_i2,
                                      const ObservableSpec& obs) {
    detail::check_pair(psi_f2, psi_i2);
    if (psi_f2.symmetry == Symmetry::none || psi_i2.symmetry != psi_f2.symmetry)
        throw SymmetryModeMismatch("identical-particle density needs matching (anti)symmetric fields");

    const SpatialGrid& g = psi_i2.grid;
    const cx a = amplitude2(psi_f2, psi_i2);
    require_amplitude(a, amplitude_floor(psi_f2, psi_i2));

    const Eigen::MatrixXcd q =
        detail::pointwise_density_rows(obs, g, psi_f2.values, psi_i2.values);
    const Eigen::VectorXd w = g.weights();

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(g.n_points);
    for (int x = 0; x < g.n_points; ++x) {
        cx acc = 0.0;
        for (int o = 0; o < g.n_points; ++o) acc += q(x, o) * w[o];
        out[x] = 2.0 * acc * g.dx / a;
    }
    return DensityField{g, std::move(out), obs, psi_i2.time, a};
}

inline DensityField density_particle(int which, const TwoParticleDensityInput& in) {
    return density_particle(which, in.psi_f2, in.psi_i2, in.observable);
}
inline DensityField density_total_distinguishable(const TwoParticleDensityInput& in) {
    return density_total_distinguishable(in.psi_f2, in.psi_i2, in.observable);
}
inline DensityField density_identical(const TwoParticleDensityInput& in) {
    return density_identical(in.psi_f2, in.psi_i2, in.observable);
}

// --- two-particle evolution -------------------------------------------------

// Non-interacting Kronecker step: psi <- U_a psi U_b^T, each coordinate
// evolved by its own single-particle operator.
inline TwoParticleField evolve_two_particle(TwoParticleField f, const StepOperator& op_a,
                                            const StepOperator& op_b, long steps) {
    require_same_grid(f.grid, op_a.grid);
    require_same_grid(f.grid, op_b.grid);
    if (op_a.dt != op_b.dt) throw ConfigError("pair step operators disagree on dt");
    for (long s = 0; s < std::labs(steps); ++s) {
        if (steps > 0) {
            f.values = op_a.forward_matrix * f.values * op_b.forward_matrix.transpose();
            f.time += op_a.dt;
        } else {
            f.values = op_a.forward_matrix.adjoint() * f.values *
                       op_b.forward_matrix.conjugate();
            f.time -= op_a.dt;
        }
    }
    return f;
}

// Crank-Nicolson in the full n^2 tensor space with a diagonal interaction
// V(x1, x2). Dense solve; supported for n_points <= 64.
inline TwoParticleField evolve_two_particle_interacting(const TwoParticleField& start,
                                                        const Eigen::VectorXd& v_a,
                                                        const Eigen::VectorXd& v_b,
                                                        const Eigen::MatrixXd& v_int,
                                                        double dt, long steps) {
    const SpatialGrid& g = start.grid;
    const int n = g.n_points;
    if (n > 64) throw ConfigError("interacting two-particle evolution supports n_points <= 64");
    if (v_int.rows() != n || v_int.cols() != n)
        throw GridMismatch("interaction table does not match grid");

    const Eigen::MatrixXd h1a = hamiltonian(g, v_a);
    const Eigen::MatrixXd h1b = hamiltonian(g, v_b);
    const int nn = n * n;
    Eigen::MatrixXd h2 = Eigen::MatrixXd::Zero(nn, nn);
    // H2 = H_a (x) I + I (x) H_b + diag(V_int); index = j * n + k for (x_j, x'_k)
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const int row = j * n + k;
            for (int l = 0; l < n; ++l) {
                h2(row, l * n + k) += h1a(j, l);
                h2(row, j * n + l) += h1b(k, l);
            }
            h2(row, row) += v_int(j, k);
        }

    const cx half_idt(0.0, 0.5 * dt);
    Eigen::MatrixXcd plus = Eigen::MatrixXcd::Identity(nn, nn) + half_idt * h2;
    const Eigen::MatrixXcd minus = Eigen::MatrixXcd::Identity(nn, nn) - half_idt * h2;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(std::move(plus));

    Eigen::VectorXcd flat(nn);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) flat[j * n + k] = start.values(j, k);

    for (long s = 0; s < steps; ++s) flat = lu.solve(minus * flat);

    TwoParticleField out = start;
    out.time = start.time + steps * dt;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) out.values(j, k) = flat[j * n + k];
    return out;
}

// --- three identical particles ---------------------------------------------

struct ThreeParticleField {
    SpatialGrid grid;
    std::vector<cx> values; // flat, index (j*n + k)*n + l for (x_j, x_k, x_l)
    double time = 0.0;

    cx at(int j, int k, int l) const {
        const int n = grid.n_points;
        return values[(static_cast<std::size_t>(j) * n + k) * n + l];
    }
};

// Slater construction (1/sqrt(3!)) det[ a b c ].
inline ThreeParticleField antisymmetrize3(const WaveField& a, const WaveField& b,
                                          const WaveField& c) {
    require_same_grid(a.grid, b.grid);
    require_same_grid(a.grid, c.grid);
    const int n = a.grid.n_points;
    ThreeParticleField out{a.grid, std::vector<cx>(static_cast<std::size_t>(n) * n * n), a.time};
    const double scale = 1.0 / std::sqrt(6.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                const cx det = a.values[j] * (b.values[k] * c.values[l] - b.values[l] * c.values[k]) -
                               b.values[j] * (a.values[k] * c.values[l] - a.values[l] * c.values[k]) +
                               c.values[j] * (a.values[k] * b.values[l] - a.values[l] * b.values[k]);
                out.values[(static_cast<std::size_t>(j) * n + k) * n + l] = scale * det;
            }
    return out;
}

inline cx amplitude3(const ThreeParticleField& f, const ThreeParticleField& i) {
    require_same_grid(f.grid, i.grid);
    const SpatialGrid& g = f.grid;
    const int n = g.n_points;
    const Eigen::VectorXd w = g.weights();
    cx acc = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                acc += std::conj(f.at(j, k, l)) * i.at(j, k, l) * w[j] * w[k] * w[l];
    return acc * g.dx * g.dx * g.dx;
}

// n = 3 identical-particle density: factor 3, two coordinates marginalized.
inline DensityField density_identical3(const ThreeParticleField& psi_f3,
                                       const ThreeParticleField& psi_i3,
                                       const ObservableSpec& obs) {
    require_same_grid(psi_f3.grid, psi_i3.grid);
    const SpatialGrid& g = psi_i3.grid;
    const int n = g.n_points;
    const cx a = amplitude3(psi_f3, psi_i3);
    if (!(std::abs(a) > 1e-10)) throw AmplitudeNearZero("three-particle boundaries are orthogonal");

    // rows: retained coordinate, columns: flattened spectator pair (k, l)
    Eigen::MatrixXcd f_block(n, n * n), i_block(n, n * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                f_block(j, k * n + l) = psi_f3.at(j, k, l);
                i_block(j, k * n + l) = psi_i3.at(j, k, l);
            }
    const Eigen::MatrixXcd q = detail::pointwise_density_rows(obs, g, f_block, i_block);
    const Eigen::VectorXd w = g.weights();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
    for (int x = 0; x < n; ++x) {
        cx acc = 0.0;
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) acc += q(x, k * n + l) * w[k] * w[l];
        out[x] = 3.0 * acc * g.dx * g.dx / a;
    }
    return DensityField{g, std::move(out), obs, psi_i3.time, a};
}

} // namespace biwave
