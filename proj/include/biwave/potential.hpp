#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "biwave/grid.hpp"

namespace biwave {

// Piecewise-constant-in-time real potential. Segments must tile the
// simulated interval; the optional channel offsets realize the two-channel
// Stern-Gerlach model (added only in segments flagged by the builder).
struct PotentialSpec {
    struct Segment {
        double t_start = 0.0;
        double t_end = 0.0;
        Eigen::VectorXd values;
        bool channel_offsets_active = false;
        std::string tag;
    };

    std::vector<Segment> segments;
    std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> channel_offsets;

    void validate(const SpatialGrid& g) const {
        if (segments.empty()) throw ConfigError("potential has no segments");
        for (std::size_t i = 0; i < segments.size(); ++i) {
            const auto& s = segments[i];
            if (s.values.size() != g.n_points)
                throw GridMismatch("potential segment length does not match grid");
            if (!s.values.allFinite()) throw Error("potential contains NaN/Inf");
            if (!(s.t_end > s.t_start))
                throw ConfigError("potential segment must have t_end > t_start");
            if (i > 0 && std::abs(segments[i - 1].t_end - s.t_start) > 1e-9)
                throw ConfigError("potential segments leave a gap or overlap");
        }
    }

    double t_start() const { return segments.front().t_start; }
    double t_end() const { return segments.back().t_end; }

    // Segment active on the step starting at time t (interior convention:
    // the step [t, t+dt) belongs to the segment containing its midpoint).
    std::size_t segment_index_at(double t_mid) const {
        for (std::size_t i = 0; i < segments.size(); ++i)
            if (t_mid >= segments[i].t_start - 1e-12 && t_mid <= segments[i].t_end + 1e-12)
                if (t_mid < segments[i].t_end || i + 1 == segments.size()) return i;
        throw UnreachableTime("time outside the potential's segments");
    }

    // channel: 0 plain, +1 / -1 select the two-channel offsets.
    Eigen::VectorXd values_for(std::size_t seg_index, int channel) const {
        const Segment& s = segments[seg_index];
        if (channel == 0 || !s.channel_offsets_active || !channel_offsets) return s.values;
        return channel > 0 ? Eigen::VectorXd(s.values + channel_offsets->first)
                           : Eigen::VectorXd(s.values + channel_offsets->second);
    }

    static PotentialSpec free_potential(const SpatialGrid& g, double t0, double t1) {
        PotentialSpec p;
        p.segments.push_back({t0, t1, Eigen::VectorXd::Zero(g.n_points), false, "free"});
        return p;
    }

    static PotentialSpec harmonic(const SpatialGrid& g, double omega, double t0, double t1) {
        PotentialSpec p;
        Eigen::VectorXd v(g.n_points);
        for (int k = 0; k < g.n_points; ++k) {
            const double x = g.coordinate(k);
            v[k] = 0.5 * omega * omega * x * x;
        }
        p.segments.push_back({t0, t1, std::move(v), false, "harmonic"});
        return p;
    }

    static PotentialSpec barrier(const SpatialGrid& g, double height, double center,
                                 double halfwidth, double t0, double t1) {
        PotentialSpec p;
        Eigen::VectorXd v = Eigen::VectorXd::Zero(g.n_points);
        for (int k = 0; k < g.n_points; ++k)
            if (std::abs(g.coordinate(k) - center) <= halfwidth) v[k] = height;
        p.segments.push_back({t0, t1, std::move(v), false, "barrier"});
        return p;
    }

    // free / +-lambda*x magnet epoch / free. The offsets act only during
    // [t_on, t_off].
    static PotentialSpec sg_gradient(const SpatialGrid& g, double lambda, double t_on,
                                     double t_off, double t0, double t1) {
        if (!(t0 <= t_on && t_on < t_off && t_off <= t1))
            throw ConfigError("sg_gradient epoch must sit inside [t0, t1]");
        PotentialSpec p;
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(g.n_points);
        if (t_on > t0) p.segments.push_back({t0, t_on, zero, false, "free"});
        p.segments.push_back({t_on, t_off, zero, true, "magnet"});
        if (t1 > t_off) p.segments.push_back({t_off, t1, zero, false, "free"});
        Eigen::VectorXd up(g.n_points), down(g.n_points);
        for (int k = 0; k < g.n_points; ++k) {
            up[k] = lambda * g.coordinate(k);
            down[k] = -lambda * g.coordinate(k);
        }
        p.channel_offsets = std::make_pair(std::move(up), std::move(down));
        return p;
    }

    static PotentialSpec from_json(const SpatialGrid& g, const nlohmann::json& j,
                                   double t0, double t1) {
        if (j.contains("segments")) {
            PotentialSpec p;
            for (const auto& s : j.at("segments")) {
                Segment seg;
                seg.t_start = s.at("t_start").get<double>();
                seg.t_end = s.at("t_end").get<double>();
                const auto vals = s.at("values").get<std::vector<double>>();
                seg.values = Eigen::Map<const Eigen::VectorXd>(vals.data(),
                                                               static_cast<long>(vals.size()));
                seg.tag = "raw";
                p.segments.push_back(std::move(seg));
            }
            p.validate(g);
            return p;
        }
        const std::string preset = j.value("preset", "free");
        if (preset == "free") return free_potential(g, t0, t1);
        if (preset == "harmonic") return harmonic(g, j.value("omega", 1.0), t0, t1);
        if (preset == "barrier")
            return barrier(g, j.value("height", 1.0), j.value("center", 0.0),
                           j.value("halfwidth", 1.0), t0, t1);
        if (preset == "sg_gradient")
            return sg_gradient(g, j.value("lambda", 1.0), j.value("t_on", t0),
                               j.value("t_off", t1), t0, t1);
        // Free evolution; the slit schedule itself lives in the scenario's
        // mask events.
        if (preset == "double_slit_mask_times") return free_potential(g, t0, t1);
        throw ConfigError("unknown potential preset: " + preset);
    }
};

} // namespace biwave
