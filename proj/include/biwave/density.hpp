#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "biwave/field.hpp"
#include "biwave/observable.hpp"

// Bilinear density fields Q(x) = psi_f^*(x) (Q psi_i)(x) / A built from an
// initial (forward-evolved) and a final (backward-evolved) wavefunction, and
// the amplitude A = <psi_f|psi_i> that normalizes them. Densities are
// complex; the total of a scalar observable is that scalar for every
// admissible boundary pair because A cancels.

namespace biwave {

struct DensityField {
    SpatialGrid grid;
    Eigen::VectorXcd values; // density per unit length
    ObservableSpec quantity;
    double time = 0.0;
    cx amplitude_used = 0.0;
};

inline cx amplitude(const WaveField& psi_f, const WaveField& psi_i) {
    return inner_product(psi_f, psi_i);
}

// Below this the 1/A amplification is treated as the formalism's genuine
// singularity (no consistent history connects the two boundary conditions).
inline double amplitude_floor(const WaveField& psi_f, const WaveField& psi_i) {
    return 1e-10 * norm(psi_f) * norm(psi_i);
}

inline void require_amplitude(const cx& a, double floor) {
    if (!(std::abs(a) > floor))
        throw AmplitudeNearZero("boundary wavefunctions are (numerically) orthogonal");
}

namespace detail {

inline Eigen::VectorXcd pointwise_density(const ObservableSpec& obs, const SpatialGrid& g,
                                          const Eigen::VectorXcd& f,
                                          const Eigen::VectorXcd& i) {
    const int n = g.n_points;
    Eigen::VectorXcd q(n);
    switch (obs.kind) {
        case ObservableSpec::Kind::mass:
            for (int k = 0; k < n; ++k) q[k] = obs.m * std::conj(f[k]) * i[k];
            return q;
        case ObservableSpec::Kind::charge:
            for (int k = 0; k < n; ++k) q[k] = obs.e * std::conj(f[k]) * i[k];
            return q;
        case ObservableSpec::Kind::momentum:
        case ObservableSpec::Kind::current: {
            const Eigen::MatrixXd d = derivative_matrix(g, obs.derivative);
            const Eigen::VectorXcd di = d * i;
            const cx half_over_i(0.0, -0.5);
            if (obs.momentum_form == ObservableSpec::MomentumForm::plain) {
                for (int k = 0; k < n; ++k)
                    q[k] = cx(0.0, -1.0) * std::conj(f[k]) * di[k];
            } else {
                const Eigen::VectorXcd df = d * f;
                for (int k = 0; k < n; ++k)
                    q[k] = half_over_i * (std::conj(f[k]) * di[k] - std::conj(df[k]) * i[k]);
            }
            if (obs.kind == ObservableSpec::Kind::current) q *= obs.e / obs.m;
            return q;
        }
        case ObservableSpec::Kind::energy: {
            // gradient-product form; with the one-sided difference the
            // quadrature total telescopes to <psi_f|H|psi_i> exactly
            const Eigen::MatrixXd grad = forward_difference(g);
            const Eigen::VectorXcd gi = grad * i;
            const Eigen::VectorXcd gf = grad * f;
            const Eigen::VectorXd v = obs.potential_on(g);
            const double kin = 0.5 / obs.kinetic_mass;
            for (int k = 0; k < n; ++k)
                q[k] = kin * std::conj(gf[k]) * gi[k] + v[k] * std::conj(f[k]) * i[k];
            return q;
        }
        default: {
            const Eigen::VectorXcd mi = obs.matrix(g) * i;
            for (int k = 0; k < n; ++k) q[k] = std::conj(f[k]) * mi[k];
            return q;
        }
    }
}

} // namespace detail

inline DensityField density(const ObservableSpec& obs, const WaveField& psi_f,
                            const WaveField& psi_i) {
    require_same_grid(psi_f.grid, psi_i.grid);
    if (std::abs(psi_f.time - psi_i.time) > time_tag_tol)
        throw TimeMismatch("density requires boundary fields at a common time");
    const cx a = amplitude(psi_f, psi_i);
    require_amplitude(a, amplitude_floor(psi_f, psi_i));
    DensityField d{psi_i.grid,
                   detail::pointwise_density(obs, psi_i.grid, psi_f.values, psi_i.values) / a,
                   obs, psi_i.time, a};
    return d;
}

inline cx total(const DensityField& d) {
    const Eigen::VectorXd w = d.grid.weights();
    cx acc = 0.0;
    for (int k = 0; k < d.grid.n_points; ++k) acc += d.values[k] * w[k];
    return acc * d.grid.dx;
}

// --- eigenvalue consistency (measured totals equal eigenvalues) ------------

enum class EigenSide { initial, final_state };

struct EigenConsistencyReport {
    cx total;
    double eigenvalue = 0.0;
    double abs_error = 0.0;
    bool pass = false;
};

inline EigenConsistencyReport eigen_consistency_check(const ObservableSpec& obs,
                                                      EigenSide side,
                                                      const WaveField& eigenfield,
                                                      const WaveField& other,
                                                      double pass_tol = 1e-8) {
    const Eigen::MatrixXcd mat = obs.matrix(eigenfield.grid);
    const Eigen::VectorXcd mv = mat * eigenfield.values;
    const double nrm2 = eigenfield.values.squaredNorm();
    const cx rayleigh = eigenfield.values.dot(mv) / nrm2; // Eigen dot conjugates lhs
    const double lambda = rayleigh.real();
    const double defect =
        (mv - rayleigh * eigenfield.values).norm() / std::sqrt(nrm2);
    if (defect > 1e-10 * (1.0 + std::abs(lambda)))
        throw NotAnEigenvector("field is not an eigenvector of the observable matrix");

    const WaveField& psi_f = (side == EigenSide::final_state) ? eigenfield : other;
    const WaveField& psi_i = (side == EigenSide::final_state) ? other : eigenfield;
    EigenConsistencyReport r;
    r.total = total(density(obs, psi_f, psi_i));
    r.eigenvalue = lambda;
    r.abs_error = std::abs(r.total - cx(lambda));
    r.pass = r.abs_error < pass_tol;
    return r;
}

} // namespace biwave
