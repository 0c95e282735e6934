#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "biwave/density.hpp"
#include "biwave/evolution.hpp"
#include "biwave/io.hpp"

// Declarative thought-experiment runners: two narrow position boundaries,
// single- and double-slit time masks, the two-channel Stern-Gerlach model,
// the momentum eigenvalue sweep, and the naive triple-measurement
// discontinuity. Each run emits density tables, an amplitude trace and
// pass/fail assertions; everything in the report is re-derivable from the
// emitted CSVs.

namespace biwave {

struct StateSpec {
    std::string kind = "gaussian"; // gaussian | narrow_peak | plane_wave | values
    double center = 0.0;
    double width = 1.0;
    double wavenumber = 0.0;
    int mode = 0;
    std::vector<double> re, im;

    WaveField realize(const SpatialGrid& g, double time) const {
        if (kind == "gaussian") return make_gaussian(g, center, width, wavenumber, time);
        if (kind == "narrow_peak") return make_narrow_peak(g, center, time);
        if (kind == "plane_wave") return make_plane_wave(g, mode, time);
        if (kind == "values") {
            if (static_cast<int>(re.size()) != g.n_points)
                throw ConfigError("state value array does not match grid");
            WaveField f{g, Eigen::VectorXcd(g.n_points), time};
            for (int k = 0; k < g.n_points; ++k)
                f.values[k] = cx(re[k], k < static_cast<int>(im.size()) ? im[k] : 0.0);
            return f;
        }
        throw ConfigError("unknown state kind: " + kind);
    }

    static StateSpec from_json(const nlohmann::json& j) {
        StateSpec s;
        s.kind = j.value("kind", "gaussian");
        s.center = j.value("center", 0.0);
        s.width = j.value("width", 1.0);
        s.wavenumber = j.value("wavenumber", 0.0);
        s.mode = j.value("mode", 0);
        if (j.contains("re")) s.re = j.at("re").get<std::vector<double>>();
        if (j.contains("im")) s.im = j.at("im").get<std::vector<double>>();
        return s;
    }

    nlohmann::json to_json() const {
        nlohmann::json j{{"kind", kind}};
        if (kind == "gaussian") {
            j["center"] = center;
            j["width"] = width;
            j["wavenumber"] = wavenumber;
        } else if (kind == "narrow_peak") {
            j["center"] = center;
        } else if (kind == "plane_wave") {
            j["mode"] = mode;
        } else {
            j["re"] = re;
            j["im"] = im;
        }
        return j;
    }
};

struct MaskEvent {
    double time = 0.0;
    std::vector<double> centers; // open apertures
    double halfwidth = 0.0;

    Eigen::VectorXd realize(const SpatialGrid& g) const {
        return slit_mask(g, centers, halfwidth);
    }

    static MaskEvent from_json(const nlohmann::json& j) {
        MaskEvent m;
        m.time = j.at("time").get<double>();
        m.centers = j.value("centers", std::vector<double>{});
        m.halfwidth = j.value("halfwidth", 0.0);
        return m;
    }

    nlohmann::json to_json() const {
        return nlohmann::json{{"time", time}, {"centers", centers}, {"halfwidth", halfwidth}};
    }
};

struct ScenarioConfig {
    std::string name;
    SpatialGrid grid;
    double t1 = 0.0, t2 = 1.0, dt = 0.01;
    StateSpec psi_i, psi_f;
    nlohmann::json potential = {{"preset", "free"}};
    std::vector<MaskEvent> masks;
    std::vector<double> snapshot_times;
    nlohmann::json assertions;         // numeric threshold overrides
    nlohmann::json extra;              // scenario-specific knobs
    double length_unit = 1.0;          // applied to emitted coordinates only
    double time_unit = 1.0;            // kernels always run in natural units

    PotentialSpec realize_potential() const {
        // a degenerate single-instant run still needs a nonempty segment
        return PotentialSpec::from_json(grid, potential, t1, std::max(t2, t1 + dt));
    }

    double threshold(const std::string& key, double fallback) const {
        if (assertions.is_object() && assertions.contains(key))
            return assertions.at(key).get<double>();
        return fallback;
    }

    void validate() const {
        if (!(t1 <= t2)) throw ConfigError("scenario needs t1 <= t2");
        double prev = t1 - 1.0;
        for (double t : snapshot_times) {
            if (t < t1 - 1e-12 || t > t2 + 1e-12)
                throw ConfigError("snapshot time outside [t1, t2]");
            if (t <= prev) throw ConfigError("snapshot times must be strictly increasing");
            prev = t;
        }
    }

    static ScenarioConfig from_json(const nlohmann::json& j) {
        if (j.value("schema", 0) != 1) throw ConfigError("config schema must be 1");
        ScenarioConfig c;
        c.name = j.at("name").get<std::string>();
        c.grid = grid_from_json(j.at("grid"));
        const auto& tm = j.at("time");
        c.t1 = tm.at("t1").get<double>();
        c.t2 = tm.at("t2").get<double>();
        c.dt = tm.at("dt").get<double>();
        if (j.contains("psi_i")) c.psi_i = StateSpec::from_json(j.at("psi_i"));
        if (j.contains("psi_f")) c.psi_f = StateSpec::from_json(j.at("psi_f"));
        if (j.contains("potential")) c.potential = j.at("potential");
        if (j.contains("masks"))
            for (const auto& m : j.at("masks")) c.masks.push_back(MaskEvent::from_json(m));
        if (j.contains("snapshot_times"))
            c.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
        if (j.contains("assertions")) c.assertions = j.at("assertions");
        if (j.contains("extra")) c.extra = j.at("extra");
        if (j.contains("units")) {
            c.length_unit = j.at("units").value("length", 1.0);
            c.time_unit = j.at("units").value("time", 1.0);
        }
        c.validate();
        return c;
    }

    nlohmann::json to_json() const {
        nlohmann::json j{{"schema", 1},
                         {"name", name},
                         {"grid", grid_to_json(grid)},
                         {"time", {{"t1", t1}, {"t2", t2}, {"dt", dt}}},
                         {"psi_i", psi_i.to_json()},
                         {"psi_f", psi_f.to_json()},
                         {"potential", potential},
                         {"snapshot_times", snapshot_times}};
        if (!masks.empty()) {
            j["masks"] = nlohmann::json::array();
            for (const auto& m : masks) j["masks"].push_back(m.to_json());
        }
        if (!assertions.is_null()) j["assertions"] = assertions;
        if (!extra.is_null()) j["extra"] = extra;
        if (length_unit != 1.0 || time_unit != 1.0)
            j["units"] = {{"length", length_unit}, {"time", time_unit}};
        return j;
    }
};

struct Assertion {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    std::string comparator; // "<" or ">"
    bool pass = false;
};

struct AuxSeries {
    std::string name;                 // file stem, e.g. "psi_i_abs"
    std::string header;               // e.g. "t,x,value"
    std::vector<std::vector<double>> rows;
};

struct ScenarioReport {
    std::string name;
    std::vector<Assertion> assertions;
    std::vector<std::pair<double, cx>> amplitude_trace;
    std::map<std::string, std::vector<DensityField>> tables; // quantity -> snapshots
    std::vector<AuxSeries> aux;
    std::vector<std::string> flags;
    double length_unit = 1.0; // coordinate scaling applied at emission
    double time_unit = 1.0;

    bool pass() const {
        if (assertions.empty() && !flags.empty()) return false;
        return std::all_of(assertions.begin(), assertions.end(),
                           [](const Assertion& a) { return a.pass; });
    }

    void assert_less(const std::string& nm, double measured, double threshold) {
        assertions.push_back({nm, measured, threshold, "<", measured < threshold});
    }
    void assert_greater(const std::string& nm, double measured, double threshold) {
        assertions.push_back({nm, measured, threshold, ">", measured > threshold});
    }

    nlohmann::json to_json() const {
        nlohmann::json j{{"schema", 1}, {"name", name}, {"pass", pass()}};
        j["flags"] = flags;
        j["assertions"] = nlohmann::json::array();
        for (const auto& a : assertions)
            j["assertions"].push_back({{"name", a.name},
                                       {"measured", a.measured},
                                       {"threshold", a.threshold},
                                       {"comparator", a.comparator},
                                       {"pass", a.pass}});
        j["amplitude_trace"] = nlohmann::json::array();
        for (const auto& [t, a] : amplitude_trace)
            j["amplitude_trace"].push_back({{"t", t}, {"re", a.real()}, {"im", a.imag()}});
        j["densities"] = nlohmann::json::array();
        for (const auto& [q, snaps] : tables)
            for (const auto& d : snaps) j["densities"].push_back(density_summary(d));
        return j;
    }
};

inline void write_report(const ScenarioReport& rep, const std::filesystem::path& dir,
                         bool real_only = false) {
    std::filesystem::create_directories(dir);
    for (const auto& [quantity, snaps] : rep.tables)
        write_density_csv(dir / (quantity + ".csv"), snaps, real_only, rep.time_unit,
                          rep.length_unit);
    {
        CsvWriter amp(dir / "amplitude_trace.csv", "t,re,im");
        for (const auto& [t, a] : rep.amplitude_trace)
            amp.row({t * rep.time_unit, a.real(), a.imag()});
    }
    for (const auto& series : rep.aux) {
        CsvWriter csv(dir / (series.name + ".csv"), series.header);
        const bool coords = series.header.rfind("t,x", 0) == 0;
        for (const auto& r : series.rows) {
            std::string line;
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) line += ',';
                double v = r[i];
                if (coords && i == 0) v *= rep.time_unit;
                if (coords && i == 1) v *= rep.length_unit;
                line += format_double(v);
            }
            csv.raw_line(line);
        }
    }
    std::ofstream out(dir / "report.json", std::ios::trunc);
    out << rep.to_json().dump(2) << "\n";
}

namespace scen {

// std of |rho| taken as a weight; the documented width metric.
inline double density_width(const DensityField& d) {
    Eigen::VectorXd w(d.grid.n_points);
    for (int k = 0; k < d.grid.n_points; ++k) w[k] = std::abs(d.values[k]);
    const double mean = centroid(w, d.grid);
    double wsum = 0.0, var = 0.0;
    for (int k = 0; k < d.grid.n_points; ++k) {
        const double dx = d.grid.coordinate(k) - mean;
        wsum += w[k];
        var += w[k] * dx * dx;
    }
    return std::sqrt(var / wsum);
}

inline double density_centroid(const DensityField& d) {
    Eigen::VectorXd w(d.grid.n_points);
    for (int k = 0; k < d.grid.n_points; ++k) w[k] = std::abs(d.values[k]);
    return centroid(w, d.grid);
}

inline double abs_integral(const DensityField& d, double lo, double hi) {
    double acc = 0.0;
    for (int k = 0; k < d.grid.n_points; ++k) {
        const double x = d.grid.coordinate(k);
        if (x >= lo && x <= hi) acc += std::abs(d.values[k]) * d.grid.weight(k);
    }
    return acc * d.grid.dx;
}

inline double abs_integral(const DensityField& d) {
    return abs_integral(d, d.grid.origin - 1.0,
                        d.grid.origin + d.grid.length() + 1.0);
}

inline std::vector<double> default_snapshots(double t1, double t2, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(t1 + (t2 - t1) * i / (count - 1));
    return out;
}

} // namespace scen

} // namespace biwave
