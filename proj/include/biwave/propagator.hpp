#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>

#include "biwave/density.hpp"
#include "biwave/evolution.hpp"

// Discrete retarded/advanced propagators as dense matrices over the step
// lattice, the line-breaking substitution K(2,1) -> (1/A) K(2,x) Q K(x,1),
// and the two-fermion amplitude/density pipeline they compose into. The
// matrix P maps field values directly (continuum kernel K corresponds to
// P / dx); all identities are stated in this matrix convention.

namespace biwave {

struct PropagatorMatrix {
    SpatialGrid grid;
    Eigen::MatrixXcd matrix;
    double t_from = 0.0;
    double t_to = 0.0;
    static constexpr const char* convention = "P = K*dx";

    double unitarity_defect() const {
        return (matrix.adjoint() * matrix -
                Eigen::MatrixXcd::Identity(grid.n_points, grid.n_points))
            .cwiseAbs()
            .maxCoeff();
    }
};

// Ordered product of step matrices accumulated as P <- U * P, one step at a
// time from t1 upward. Drift from unitarity is asserted every 128 factors,
// never corrected.
inline PropagatorMatrix retarded(const SpatialGrid& g, const PotentialSpec& pot,
                                 double t1, double t2, double dt) {
    if (t2 < t1 - 1e-12) throw TimeOrderViolation("retarded propagator needs t2 >= t1");
    Stepper st(g, pot, dt);
    const long steps = st.steps_between(t1, t2);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(g.n_points, g.n_points);
    for (long i = 0; i < steps; ++i) {
        const double lo = t1 + i * dt;
        p = st.op_at(lo + 0.5 * dt).forward_matrix * p;
        if ((i + 1) % 128 == 0) {
            const double drift =
                (p.adjoint() * p -
                 Eigen::MatrixXcd::Identity(g.n_points, g.n_points))
                    .cwiseAbs()
                    .maxCoeff();
            if (drift > 1e-8)
                throw Error("propagator product drifted from unitarity: " +
                            std::to_string(drift));
        }
    }
    return PropagatorMatrix{g, std::move(p), t1, t2};
}

// Advanced propagator mapping fields at t2 back to t1, with the sign of the
// kernel convention conj(K_A(x, x')) = -K_R(x', x). Accumulated from its own
// adjoint step factors rather than derived from retarded(), so the identity
// is a genuine cross-check.
inline PropagatorMatrix advanced(const SpatialGrid& g, const PotentialSpec& pot,
                                 double t1, double t2, double dt) {
    if (t2 < t1 - 1e-12) throw TimeOrderViolation("advanced propagator needs t1 <= t2");
    Stepper st(g, pot, dt);
    const long steps = st.steps_between(t1, t2);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(g.n_points, g.n_points);
    for (long i = steps - 1; i >= 0; --i) {
        const double lo = t1 + i * dt;
        p = st.op_at(lo + 0.5 * dt).forward_matrix.adjoint() * p;
    }
    return PropagatorMatrix{g, Eigen::MatrixXcd(-p), t2, t1};
}

inline PropagatorMatrix compose(const PropagatorMatrix& later, const PropagatorMatrix& earlier) {
    require_same_grid(later.grid, earlier.grid);
    if (std::abs(later.t_from - earlier.t_to) > 1e-12)
        throw TimeOrderViolation("composed propagators do not meet at a common time");
    return PropagatorMatrix{later.grid, later.matrix * earlier.matrix, earlier.t_from,
                            later.t_to};
}

inline WaveField apply(const PropagatorMatrix& p, const WaveField& f) {
    require_same_grid(p.grid, f.grid);
    if (std::abs(f.time - p.t_from) > time_tag_tol)
        throw TimeMismatch("field time does not match the propagator's source time");
    return WaveField{f.grid, p.matrix * f.values, p.t_to};
}

namespace detail {

struct BrokenLineParts {
    Eigen::VectorXcd i_at_break;  // P(t, t1) psi_i
    Eigen::VectorXcd f_at_break;  // psi_f pulled back to t through P(t2, t)
    cx sandwich;                  // <psi_f(t2)| P(t2,t1) |psi_i(t1)> via the split
};

inline void check_break_order(double t1, double t, double t2) {
    if (!(t1 < t && t < t2))
        throw TimeOrderViolation("break time must satisfy t1 < t < t2");
}

} // namespace detail

// Density of Q at the interior break time t, evaluated entirely through
// propagator matrices: (1/A) [psi_f^T* P(t2,t)]_x [Q P(t,t1) psi_i]_x.
// Cross-validated against the wavefunction route in the test suite.
inline DensityField broken_line_density(const ObservableSpec& obs, const WaveField& psi_f_end,
                                        const WaveField& psi_i_start, const PotentialSpec& pot,
                                        double t1, double t, double t2, double dt) {
    detail::check_break_order(t1, t, t2);
    require_same_grid(psi_f_end.grid, psi_i_start.grid);
    if (std::abs(psi_i_start.time - t1) > time_tag_tol ||
        std::abs(psi_f_end.time - t2) > time_tag_tol)
        throw TimeMismatch("boundary fields must carry the interval's end times");

    const SpatialGrid& g = psi_i_start.grid;
    const PropagatorMatrix p_lo = retarded(g, pot, t1, t, dt);
    const PropagatorMatrix p_hi = retarded(g, pot, t, t2, dt);

    const Eigen::VectorXcd i_t = p_lo.matrix * psi_i_start.values;
    const Eigen::VectorXcd f_t = p_hi.matrix.adjoint() * psi_f_end.values;

    // amplitude from the unbroken sandwich over the same matrices
    const WaveField i_end{g, p_hi.matrix * i_t, t2};
    const cx a = inner_product(psi_f_end, i_end);
    require_amplitude(a, 1e-10 * norm(psi_f_end) * norm(psi_i_start));

    const Eigen::VectorXcd q_i = detail::pointwise_density(obs, g, f_t, i_t);
    return DensityField{g, q_i / a, obs, t, a};
}

// Two-fermion amplitude, direct minus exchange:
// <fa|P|ia><fb|P|ib> - <fb|P|ia><fa|P|ib> with P = P(t2, t1).
inline cx appendix_amplitude(const WaveField& psi_ia, const WaveField& psi_ib,
                             const WaveField& psi_fa, const WaveField& psi_fb,
                             const PotentialSpec& pot, double t1, double t2, double dt) {
    const SpatialGrid& g = psi_ia.grid;
    const PropagatorMatrix p = retarded(g, pot, t1, t2, dt);
    const WaveField ia_end{g, p.matrix * psi_ia.values, t2};
    const WaveField ib_end{g, p.matrix * psi_ib.values, t2};
    const cx faia = inner_product(psi_fa, ia_end);
    const cx fbib = inner_product(psi_fb, ib_end);
    const cx fbia = inner_product(psi_fb, ia_end);
    const cx faib = inner_product(psi_fa, ib_end);
    return faia * fbib - fbia * faib;
}

// Density for two non-interacting identical fermions: the four terms of the
// broken-line expansion (two direct, two exchange), divided by the
// two-fermion amplitude.
inline DensityField appendix_density(const ObservableSpec& obs, const WaveField& psi_ia,
                                     const WaveField& psi_ib, const WaveField& psi_fa,
                                     const WaveField& psi_fb, const PotentialSpec& pot,
                                     double t1, double t, double t2, double dt) {
    detail::check_break_order(t1, t, t2);
    const SpatialGrid& g = psi_ia.grid;
    const PropagatorMatrix p_lo = retarded(g, pot, t1, t, dt);
    const PropagatorMatrix p_hi = retarded(g, pot, t, t2, dt);

    const WaveField ia{g, p_lo.matrix * psi_ia.values, t};
    const WaveField ib{g, p_lo.matrix * psi_ib.values, t};
    const WaveField fa{g, p_hi.matrix.adjoint() * psi_fa.values, t};
    const WaveField fb{g, p_hi.matrix.adjoint() * psi_fb.values, t};

    const cx s_faia = inner_product(fa, ia);
    const cx s_fbib = inner_product(fb, ib);
    const cx s_fbia = inner_product(fb, ia);
    const cx s_faib = inner_product(fa, ib);
    const cx a = s_faia * s_fbib - s_fbia * s_faib;
    require_amplitude(a, 1e-10);

    const Eigen::VectorXcd q_ia_fa = detail::pointwise_density(obs, g, fa.values, ia.values);
    const Eigen::VectorXcd q_ib_fb = detail::pointwise_density(obs, g, fb.values, ib.values);
    const Eigen::VectorXcd q_ia_fb = detail::pointwise_density(obs, g, fb.values, ia.values);
    const Eigen::VectorXcd q_ib_fa = detail::pointwise_density(obs, g, fa.values, ib.values);

    const Eigen::VectorXcd sum = q_ia_fa * s_fbib + q_ib_fb * s_faia -
                                 q_ia_fb * s_faib - q_ib_fa * s_fbia;
    return DensityField{g, sum / a, obs, t, a};
}

// Executable form of the diagram rule: in each of the two amplitude diagrams
// substitute one propagator line at a time per K(2,1) -> (1/A) K(2,x) Q K(x,1)
// and compare term-by-term with the density expansion. Spectator sandwiches
// here go through the *unsplit* propagator P(t2,t1), so the comparison
// exercises the composition identity inside every term.
struct SubstitutionReport {
    double max_term_rel_dev = 0.0;     // split vs unsplit spectator route
    double identity_total_dev = 0.0;   // Q = 1: per-term totals vs amplitude factors
    cx amplitude = 0.0;
    bool pass = false;
};

inline SubstitutionReport substitution_check(const ObservableSpec& obs, const WaveField& psi_ia,
                                             const WaveField& psi_ib, const WaveField& psi_fa,
                                             const WaveField& psi_fb, const PotentialSpec& pot,
                                             double t1, double t, double t2, double dt,
                                             double term_tol = 1e-9) {
    detail::check_break_order(t1, t, t2);
    const SpatialGrid& g = psi_ia.grid;
    const PropagatorMatrix p_lo = retarded(g, pot, t1, t, dt);
    const PropagatorMatrix p_hi = retarded(g, pot, t, t2, dt);
    const PropagatorMatrix p_full = retarded(g, pot, t1, t2, dt); // unsplit

    const WaveField ia{g, p_lo.matrix * psi_ia.values, t};
    const WaveField ib{g, p_lo.matrix * psi_ib.values, t};
    const WaveField fa{g, p_hi.matrix.adjoint() * psi_fa.values, t};
    const WaveField fb{g, p_hi.matrix.adjoint() * psi_fb.values, t};

    auto full_sandwich = [&](const WaveField& f_end, const WaveField& i_start) {
        const WaveField evolved{g, p_full.matrix * i_start.values, t2};
        return inner_product(f_end, evolved);
    };
    const cx u_faia = full_sandwich(psi_fa, psi_ia);
    const cx u_fbib = full_sandwich(psi_fb, psi_ib);
    const cx u_fbia = full_sandwich(psi_fb, psi_ia);
    const cx u_faib = full_sandwich(psi_fa, psi_ib);
    const cx amplitude_full = u_faia * u_fbib - u_fbia * u_faib;

    // broken-line fields per (final, initial) pairing
    const Eigen::VectorXcd b_faia = detail::pointwise_density(obs, g, fa.values, ia.values);
    const Eigen::VectorXcd b_fbib = detail::pointwise_density(obs, g, fb.values, ib.values);
    const Eigen::VectorXcd b_fbia = detail::pointwise_density(obs, g, fb.values, ia.values);
    const Eigen::VectorXcd b_faib = detail::pointwise_density(obs, g, fa.values, ib.values);

    // split-route spectators (the density expansion's own factors)
    const cx s_faia = inner_product(fa, ia);
    const cx s_fbib = inner_product(fb, ib);
    const cx s_fbia = inner_product(fb, ia);
    const cx s_faib = inner_product(fa, ib);

    struct Term {
        const Eigen::VectorXcd* broken;
        cx spectator_split;
        cx spectator_full;
    };
    const std::array<Term, 4> terms{{{&b_faia, s_fbib, u_fbib},
                                     {&b_fbib, s_faia, u_faia},
                                     {&b_fbia, -s_faib, -u_faib},
                                     {&b_faib, -s_fbia, -u_fbia}}};

    SubstitutionReport rep;
    rep.amplitude = amplitude_full;
    double scale = 0.0;
    for (const auto& tm : terms)
        scale = std::max(scale, (tm.broken->cwiseAbs().maxCoeff()) * std::abs(tm.spectator_full));
    for (const auto& tm : terms) {
        const Eigen::VectorXcd split = *tm.broken * tm.spectator_split;
        const Eigen::VectorXcd full = *tm.broken * tm.spectator_full;
        rep.max_term_rel_dev =
            std::max(rep.max_term_rel_dev, (split - full).cwiseAbs().maxCoeff() / scale);
    }

    // Q = 1 collapses each broken line back to its own sandwich
    const Eigen::VectorXd w = g.weights();
    auto quad_total = [&](const Eigen::VectorXcd& v) {
        cx acc = 0.0;
        for (int k = 0; k < g.n_points; ++k) acc += v[k] * w[k];
        return acc * g.dx;
    };
    const auto unit = ObservableSpec::custom(
        Eigen::MatrixXcd::Identity(g.n_points, g.n_points));
    const std::array<std::pair<const WaveField*, const WaveField*>, 4> pairs{
        {{&fa, &ia}, {&fb, &ib}, {&fb, &ia}, {&fa, &ib}}};
    const std::array<cx, 4> expect{{u_faia, u_fbib, u_fbia, u_faib}};
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Eigen::VectorXcd line = detail::pointwise_density(
            unit, g, pairs[i].first->values, pairs[i].second->values);
        rep.identity_total_dev =
            std::max(rep.identity_total_dev, std::abs(quad_total(line) - expect[i]));
    }

    rep.pass = rep.max_term_rel_dev < term_tol && rep.identity_total_dev < term_tol;
    return rep;
}

} // namespace biwave
