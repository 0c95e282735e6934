#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "biwave/field.hpp"
#include "biwave/operators.hpp"
#include "biwave/potential.hpp"

namespace biwave {

// One Crank-Nicolson step U = (I + i dt H / 2)^{-1} (I - i dt H / 2) for a
// fixed potential segment. U is the Cayley transform of the real symmetric
// H, hence unitary; U^dagger is its exact inverse, so backward stepping uses
// the adjoint rather than a separately derived scheme.
struct StepOperator {
    SpatialGrid grid;
    double dt = 0.0;
    Eigen::MatrixXcd forward_matrix;
    std::string segment_tag;

    double unitarity_defect() const {
        const Eigen::MatrixXcd r =
            forward_matrix.adjoint() * forward_matrix -
            Eigen::MatrixXcd::Identity(grid.n_points, grid.n_points);
        return r.cwiseAbs().maxCoeff();
    }
};

inline StepOperator build_step(const SpatialGrid& g, const Eigen::VectorXd& potential,
                               double dt, std::string tag = {}) {
    if (!(dt > 0.0)) throw ConfigError("step size must be positive");
    const int n = g.n_points;
    const Eigen::MatrixXd h = hamiltonian(g, potential);
    const cx half_idt(0.0, 0.5 * dt);
    Eigen::MatrixXcd plus = Eigen::MatrixXcd::Identity(n, n) + half_idt * h;
    Eigen::MatrixXcd minus = Eigen::MatrixXcd::Identity(n, n) - half_idt * h;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(plus);
    if (lu.determinant() == cx(0.0, 0.0))
        throw SingularSolve("implicit Crank-Nicolson system is singular");
    StepOperator op{g, dt, lu.solve(minus), std::move(tag)};
    return op;
}

inline WaveField step_forward(const WaveField& f, const StepOperator& op) {
    require_same_grid(f.grid, op.grid);
    return WaveField{f.grid, op.forward_matrix * f.values, f.time + op.dt};
}

inline WaveField step_backward(const WaveField& f, const StepOperator& op) {
    require_same_grid(f.grid, op.grid);
    return WaveField{f.grid, op.forward_matrix.adjoint() * f.values, f.time - op.dt};
}

// Multi-step driver. Owns the per-segment step-operator cache; operators are
// built once and shared read-only, stepping itself is a pure function.
class Stepper {
  public:
    Stepper(SpatialGrid grid, PotentialSpec potential, double dt, int channel = 0)
        : grid_(std::move(grid)), potential_(std::move(potential)), dt_(dt),
          channel_(channel) {
        potential_.validate(grid_);
        if (!(dt_ > 0.0)) throw ConfigError("step size must be positive");
    }

    const SpatialGrid& grid() const { return grid_; }
    double dt() const { return dt_; }
    const PotentialSpec& potential() const { return potential_; }

    const StepOperator& op_at(double t_mid) const {
        return op(potential_.segment_index_at(t_mid));
    }

    const StepOperator& op(std::size_t idx) const {
        auto it = cache_.find(idx);
        if (it == cache_.end()) {
            auto op = std::make_shared<StepOperator>(
                build_step(grid_, potential_.values_for(idx, channel_), dt_,
                           potential_.segments[idx].tag));
            it = cache_.emplace(idx, std::move(op)).first;
        }
        return *it->second;
    }

    long steps_between(double t_from, double t_to) const {
        const double raw = (t_to - t_from) / dt_;
        const double rounded = std::round(raw);
        if (std::abs(raw - rounded) > 1e-9 * std::max(1.0, std::abs(raw)))
            throw UnreachableTime("target time not reachable by whole steps");
        return static_cast<long>(rounded);
    }

    WaveField evolve(WaveField f, double t_target) const {
        const long n = steps_between(f.time, t_target);
        const double t0 = f.time;
        for (long i = 0; i < std::labs(n); ++i) {
            // potentials are piecewise constant per step; a step may not
            // straddle a segment boundary
            const double lo = n > 0 ? t0 + i * dt_ : t0 - (i + 1) * dt_;
            const std::size_t idx = potential_.segment_index_at(lo + 0.5 * dt_);
            const auto& seg = potential_.segments[idx];
            if (lo < seg.t_start - 1e-9 * dt_ || lo + dt_ > seg.t_end + 1e-9 * dt_)
                throw UnreachableTime("step straddles a potential segment boundary");
            f = n > 0 ? step_forward(f, op(idx)) : step_backward(f, op(idx));
        }
        f.time = t_target; // clear accumulated rounding in the tag
        return f;
    }

    std::vector<WaveField> snapshots(const WaveField& start,
                                     const std::vector<double>& times) const {
        std::vector<WaveField> out;
        WaveField f = start;
        for (double t : times) {
            f = evolve(std::move(f), t);
            out.push_back(f);
        }
        return out;
    }

  private:
    SpatialGrid grid_;
    PotentialSpec potential_;
    double dt_;
    int channel_;
    mutable std::map<std::size_t, std::shared_ptr<const StepOperator>> cache_;
};

inline WaveField evolve_interval(const WaveField& f, const PotentialSpec& potential,
                                 double t_target, double dt) {
    return Stepper(f.grid, potential, dt).evolve(f, t_target);
}

} // namespace biwave
