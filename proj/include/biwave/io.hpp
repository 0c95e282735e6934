#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "biwave/density.hpp"
#include "biwave/propagator.hpp"

// File formats: CSV tables with shortest-round-trip doubles (deterministic
// bytes for identical inputs), JSON sidecars/reports, and raw row-major
// complex arrays (little-endian double pairs) for bulk data.

namespace biwave {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline nlohmann::json grid_to_json(const SpatialGrid& g) {
    return nlohmann::json{{"n_points", g.n_points},
                          {"dx", g.dx},
                          {"origin", g.origin},
                          {"boundary", to_string(g.boundary)}};
}

inline SpatialGrid grid_from_json(const nlohmann::json& j) {
    return SpatialGrid(j.at("n_points").get<int>(), j.at("dx").get<double>(),
                       j.at("origin").get<double>(),
                       boundary_from_string(j.at("boundary").get<std::string>()));
}

// --- CSV ---------------------------------------------------------------------

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::string& header) {
        std::filesystem::create_directories(path.parent_path());
        out_.open(path, std::ios::trunc);
        if (!out_) throw Error("cannot open " + path.string());
        out_ << header << "\n";
    }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            if (!first) out_ << ',';
            out_ << format_double(v);
            first = false;
        }
        out_ << "\n";
    }

    void raw_line(const std::string& line) { out_ << line << "\n"; }

  private:
    std::ofstream out_;
};

// One density snapshot appended as rows (t, x, re[, im]). Unit factors scale
// the coordinate columns only; values stay in natural units.
inline void append_density_rows(CsvWriter& csv, const DensityField& d, bool real_only,
                                double t_unit = 1.0, double x_unit = 1.0) {
    for (int k = 0; k < d.grid.n_points; ++k) {
        if (real_only) {
            csv.row({d.time * t_unit, d.grid.coordinate(k) * x_unit, d.values[k].real()});
        } else {
            csv.row({d.time * t_unit, d.grid.coordinate(k) * x_unit, d.values[k].real(),
                     d.values[k].imag()});
        }
    }
}

inline void write_density_csv(const std::filesystem::path& path,
                              const std::vector<DensityField>& snapshots,
                              bool real_only = false, double t_unit = 1.0,
                              double x_unit = 1.0) {
    CsvWriter csv(path, real_only ? "t,x,re" : "t,x,re,im");
    for (const auto& d : snapshots)
        append_density_rows(csv, d, real_only, t_unit, x_unit);
}

inline nlohmann::json density_summary(const DensityField& d) {
    const cx t = total(d);
    return nlohmann::json{{"quantity", d.quantity.label()},
                          {"time", d.time},
                          {"A", {d.amplitude_used.real(), d.amplitude_used.imag()}},
                          {"total", {t.real(), t.imag()}}};
}

// --- raw complex arrays ------------------------------------------------------

inline void write_complex_blob(const std::filesystem::path& path,
                               const cx* data, std::size_t count) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string());
    for (std::size_t i = 0; i < count; ++i) {
        const double re = data[i].real(), im = data[i].imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(double));
        out.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
}

inline std::vector<cx> read_complex_blob(const std::filesystem::path& path,
                                         std::size_t count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<cx> data(count);
    for (std::size_t i = 0; i < count; ++i) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), sizeof(double));
        in.read(reinterpret_cast<char*>(&im), sizeof(double));
        data[i] = cx(re, im);
    }
    if (!in) throw Error("short read from " + path.string());
    return data;
}

// Two-particle field: row-major blob + JSON sidecar.
inline void write_two_particle(const std::filesystem::path& stem, const TwoParticleField& f) {
    const int n = f.grid.n_points;
    std::vector<cx> flat(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) flat[static_cast<std::size_t>(j) * n + k] = f.values(j, k);
    write_complex_blob(stem.string() + ".bin", flat.data(), flat.size());

    nlohmann::json side{{"n_points", n},
                        {"dx", f.grid.dx},
                        {"origin", f.grid.origin},
                        {"boundary", to_string(f.grid.boundary)},
                        {"symmetry", to_string(f.symmetry)},
                        {"time", f.time}};
    std::ofstream out(stem.string() + ".json", std::ios::trunc);
    out << side.dump(2) << "\n";
}

inline TwoParticleField read_two_particle(const std::filesystem::path& stem) {
    std::ifstream in(stem.string() + ".json");
    if (!in) throw Error("cannot open " + stem.string() + ".json");
    nlohmann::json side = nlohmann::json::parse(in);
    const int n = side.at("n_points").get<int>();
    SpatialGrid g(n, side.at("dx").get<double>(), side.value("origin", 0.0),
                  boundary_from_string(side.at("boundary").get<std::string>()));
    const auto flat = read_complex_blob(stem.string() + ".bin",
                                        static_cast<std::size_t>(n) * n);
    TwoParticleField f{g, Eigen::MatrixXcd(n, n), side.at("time").get<double>(),
                       Symmetry::none};
    const std::string sym = side.at("symmetry").get<std::string>();
    if (sym == "symmetric") f.symmetry = Symmetry::symmetric;
    if (sym == "antisymmetric") f.symmetry = Symmetry::antisymmetric;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) f.values(j, k) = flat[static_cast<std::size_t>(j) * n + k];
    return f;
}

// Propagator matrix: row-major blob + sidecar recording the convention.
inline void write_propagator(const std::filesystem::path& stem, const PropagatorMatrix& p) {
    const int n = p.grid.n_points;
    std::vector<cx> flat(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) flat[static_cast<std::size_t>(j) * n + k] = p.matrix(j, k);
    write_complex_blob(stem.string() + ".bin", flat.data(), flat.size());

    nlohmann::json side{{"t_from", p.t_from}, {"t_to", p.t_to},
                        {"n_points", n},      {"dx", p.grid.dx},
                        {"convention", PropagatorMatrix::convention}};
    std::ofstream out(stem.string() + ".json", std::ios::trunc);
    out << side.dump(2) << "\n";
}

inline PropagatorMatrix read_propagator(const std::filesystem::path& stem,
                                        const SpatialGrid& g) {
    std::ifstream in(stem.string() + ".json");
    if (!in) throw Error("cannot open " + stem.string() + ".json");
    nlohmann::json side = nlohmann::json::parse(in);
    const int n = side.at("n_points").get<int>();
    if (n != g.n_points || side.at("dx").get<double>() != g.dx)
        throw GridMismatch("stored propagator does not match the grid");
    const auto flat = read_complex_blob(stem.string() + ".bin",
                                        static_cast<std::size_t>(n) * n);
    PropagatorMatrix p{g, Eigen::MatrixXcd(n, n), side.at("t_from").get<double>(),
                       side.at("t_to").get<double>()};
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) p.matrix(j, k) = flat[static_cast<std::size_t>(j) * n + k];
    return p;
}

} // namespace biwave
