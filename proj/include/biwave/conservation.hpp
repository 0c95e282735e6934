#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "biwave/density.hpp"
#include "biwave/evolution.hpp"

// Numerical verification of the variational structure: residuals of the two
// field equations along snapshot trajectories, the mixed-wavefunction
// continuity equation, and the constancy of the connecting amplitude and
// total energy. Conservation consequences are checked, not re-derived.

namespace biwave {

struct ResidualReport {
    std::string quantity;          // schrodinger_i, schrodinger_f, continuity, ...
    double max_abs = 0.0;
    double l2 = 0.0;
    int n_points = 0;
    double dt = 0.0;
    std::vector<double> times;     // sample times of `series`
    std::vector<double> series;    // per-time residual magnitude
    std::size_t worst_index = 0;

    nlohmann::json to_json() const {
        return nlohmann::json{{"quantity", quantity}, {"max_abs", max_abs},
                              {"l2", l2},           {"n_points", n_points},
                              {"dt", dt},           {"worst_index", worst_index}};
    }
};

// One JSON record per line, machine-diffable for regression runs.
inline void write_residual_jsonl(const std::filesystem::path& path,
                                 const std::vector<ResidualReport>& reports) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string());
    for (const auto& r : reports) out << r.to_json().dump() << "\n";
}

namespace detail {

inline void check_trajectory(const std::vector<WaveField>& traj) {
    if (traj.size() < 3)
        throw MissingSnapshots("need at least 3 equispaced snapshots");
    const double dt = traj[1].time - traj[0].time;
    if (!(dt > 0.0)) throw MissingSnapshots("snapshots must be strictly time-ordered");
    for (std::size_t i = 1; i < traj.size(); ++i)
        if (std::abs(traj[i].time - traj[i - 1].time - dt) > 1e-9 * dt)
            throw MissingSnapshots("snapshots are not equispaced");
}

inline double quad_l2(const Eigen::VectorXcd& v, const SpatialGrid& g) {
    const Eigen::VectorXd w = g.weights();
    double acc = 0.0;
    for (int k = 0; k < g.n_points; ++k) acc += std::norm(v[k]) * w[k];
    return std::sqrt(acc * g.dx);
}

inline ResidualReport summarize(std::string name, const SpatialGrid& g, double dt,
                                std::vector<double> times, std::vector<double> maxima,
                                std::vector<double> l2s) {
    ResidualReport rep;
    rep.quantity = std::move(name);
    rep.n_points = g.n_points;
    rep.dt = dt;
    rep.times = std::move(times);
    rep.series = std::move(maxima);
    for (std::size_t i = 0; i < rep.series.size(); ++i) {
        if (rep.series[i] > rep.max_abs) {
            rep.max_abs = rep.series[i];
            rep.worst_index = i;
        }
        rep.l2 = std::max(rep.l2, l2s[i]);
    }
    return rep;
}

} // namespace detail

// Mixed Lagrangian density at the middle of three snapshot levels:
// -(1/2)(grad psi_f)^* . (grad psi_i) + (i/2)(psi_f^* dpsi_i/dt -
// dpsi_f^*/dt psi_i) - V psi_f^* psi_i, with centered time differences.
inline Eigen::VectorXcd lagrangian_density(const std::vector<WaveField>& psi_f_levels,
                                           const std::vector<WaveField>& psi_i_levels,
                                           const Eigen::VectorXd& potential,
                                           std::size_t mid = 1) {
    detail::check_trajectory(psi_f_levels);
    detail::check_trajectory(psi_i_levels);
    if (mid == 0 || mid + 1 >= psi_i_levels.size())
        throw MissingSnapshots("lagrangian needs an interior snapshot index");
    const SpatialGrid& g = psi_i_levels[mid].grid;
    const double dt = psi_i_levels[mid + 1].time - psi_i_levels[mid].time;

    const Eigen::MatrixXd grad = forward_difference(g);
    const Eigen::VectorXcd gi = grad * psi_i_levels[mid].values;
    const Eigen::VectorXcd gf = grad * psi_f_levels[mid].values;
    const Eigen::VectorXcd di =
        (psi_i_levels[mid + 1].values - psi_i_levels[mid - 1].values) / (2.0 * dt);
    const Eigen::VectorXcd df =
        (psi_f_levels[mid + 1].values - psi_f_levels[mid - 1].values) / (2.0 * dt);

    Eigen::VectorXcd lag(g.n_points);
    const cx half_i(0.0, 0.5);
    for (int k = 0; k < g.n_points; ++k) {
        const cx f = psi_f_levels[mid].values[k];
        const cx i = psi_i_levels[mid].values[k];
        lag[k] = -0.5 * std::conj(gf[k]) * gi[k] +
                 half_i * (std::conj(f) * di[k] - std::conj(df[k]) * i) -
                 potential[k] * std::conj(f) * i;
    }
    return lag;
}

// Residuals of the two Euler-Lagrange equations,
//   -(1/2) grad^2 psi_i + V psi_i = i dpsi_i/dt
//   -(1/2) grad^2 psi_f^* + V psi_f^* = -i dpsi_f^*/dt,
// at every interior snapshot time.
inline std::vector<ResidualReport> field_equation_residuals(
    const std::vector<WaveField>& traj_i, const std::vector<WaveField>& traj_f,
    const PotentialSpec& potential) {
    detail::check_trajectory(traj_i);
    detail::check_trajectory(traj_f);
    const SpatialGrid& g = traj_i[0].grid;
    const double dt = traj_i[1].time - traj_i[0].time;

    std::vector<double> times, max_i, l2_i, max_f, l2_f;
    for (std::size_t n = 1; n + 1 < traj_i.size(); ++n) {
        const double t = traj_i[n].time;
        const Eigen::MatrixXd h = hamiltonian(
            g, potential.values_for(potential.segment_index_at(t), 0));

        const Eigen::VectorXcd di =
            cx(0.0, 1.0) * (traj_i[n + 1].values - traj_i[n - 1].values) / (2.0 * dt);
        const Eigen::VectorXcd ri = h * traj_i[n].values - di;

        const Eigen::VectorXcd fconj = traj_f[n].values.conjugate();
        const Eigen::VectorXcd dfconj =
            (traj_f[n + 1].values.conjugate() - traj_f[n - 1].values.conjugate()) /
            (2.0 * dt);
        const Eigen::VectorXcd rf = h * fconj + cx(0.0, 1.0) * dfconj;

        times.push_back(t);
        max_i.push_back(ri.cwiseAbs().maxCoeff());
        l2_i.push_back(detail::quad_l2(ri, g));
        max_f.push_back(rf.cwiseAbs().maxCoeff());
        l2_f.push_back(detail::quad_l2(rf, g));
    }
    return {detail::summarize("schrodinger_i", g, dt, times, max_i, l2_i),
            detail::summarize("schrodinger_f", g, dt, times, max_f, l2_f)};
}

// Staggered link current whose midpoint divergence cancels the D2 kinetic
// term exactly; the continuity residual then measures the time
// discretization alone.
inline Eigen::VectorXcd link_current(const Eigen::VectorXcd& f, const Eigen::VectorXcd& i,
                                     const SpatialGrid& g, cx amplitude, double charge) {
    const int n = g.n_points;
    Eigen::VectorXcd j(n); // j[k] = J_{k+1/2}
    const cx c = charge / (cx(0.0, 2.0) * g.dx * amplitude);
    for (int k = 0; k < n; ++k) {
        const int kp = (k + 1 < n) ? k + 1 : (g.periodic() ? 0 : -1);
        j[k] = kp < 0 ? cx(0.0)
                      : c * (std::conj(f[k]) * i[kp] - std::conj(f[kp]) * i[k]);
    }
    return j;
}

inline std::vector<ResidualReport> noether_checks(const std::vector<WaveField>& traj_i,
                                                  const std::vector<WaveField>& traj_f,
                                                  const PotentialSpec& potential,
                                                  double charge = 1.0) {
    detail::check_trajectory(traj_i);
    detail::check_trajectory(traj_f);
    const SpatialGrid& g = traj_i[0].grid;
    const int n = g.n_points;
    const double dt = traj_i[1].time - traj_i[0].time;

    WaveField f0 = traj_f[0];
    f0.time = traj_i[0].time;
    const cx a0 = inner_product(f0, traj_i[0]);
    require_amplitude(a0, amplitude_floor(traj_f[0], traj_i[0]));

    auto rho_at = [&](std::size_t idx) {
        Eigen::VectorXcd rho(n);
        for (int k = 0; k < n; ++k)
            rho[k] = charge * std::conj(traj_f[idx].values[k]) * traj_i[idx].values[k] / a0;
        return rho;
    };

    std::vector<double> times, max_c, l2_c;
    for (std::size_t m = 1; m + 1 < traj_i.size(); ++m) {
        const Eigen::VectorXcd drho = (rho_at(m + 1) - rho_at(m - 1)) / (2.0 * dt);
        const Eigen::VectorXcd j =
            link_current(traj_f[m].values, traj_i[m].values, g, a0, charge);
        Eigen::VectorXcd res(n);
        for (int k = 0; k < n; ++k) {
            const int km = (k - 1 >= 0) ? k - 1 : (g.periodic() ? n - 1 : -1);
            const cx j_minus = km < 0 ? cx(0.0) : j[km];
            res[k] = drho[k] + (j[k] - j_minus) / g.dx;
        }
        times.push_back(traj_i[m].time);
        max_c.push_back(res.cwiseAbs().maxCoeff());
        l2_c.push_back(detail::quad_l2(res, g));
    }

    std::vector<double> all_times, amp_drift, energy_drift, zeros;
    cx e0 = 0.0;
    for (std::size_t m = 0; m < traj_i.size(); ++m) {
        const double t = traj_i[m].time;
        const Eigen::MatrixXd h = hamiltonian(
            g, potential.values_for(potential.segment_index_at(t), 0));
        WaveField fm = traj_f[m];
        fm.time = t;
        const cx a = inner_product(fm, traj_i[m]);
        WaveField hi = traj_i[m];
        hi.values = h * traj_i[m].values;
        const cx e = inner_product(fm, hi) / a;
        if (m == 0) e0 = e;
        all_times.push_back(t);
        amp_drift.push_back(std::abs(a - a0));
        energy_drift.push_back(std::abs(e - e0));
        zeros.push_back(0.0);
    }

    return {detail::summarize("continuity", g, dt, times, max_c, l2_c),
            detail::summarize("amplitude_drift", g, dt, all_times, amp_drift, zeros),
            detail::summarize("energy_drift", g, dt, all_times, energy_drift, zeros)};
}

} // namespace biwave
