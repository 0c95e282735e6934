#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "biwave/grid.hpp"

namespace biwave {

using cx = std::complex<double>;

constexpr double time_tag_tol = 1e-12;

// Complex field sampled on a grid with a time tag. Immutable by convention
// after construction: operations return new fields.
struct WaveField {
    SpatialGrid grid;
    Eigen::VectorXcd values;
    double time = 0.0;
};

inline void validate(const WaveField& f) {
    if (f.values.size() != f.grid.n_points)
        throw GridMismatch("field length does not match grid");
    if (!f.values.allFinite()) throw Error("field contains NaN/Inf values");
}

inline cx inner_product(const WaveField& bra, const WaveField& ket) {
    require_same_grid(bra.grid, ket.grid);
    if (std::abs(bra.time - ket.time) > time_tag_tol)
        throw TimeMismatch("inner product of fields at different times");
    const Eigen::VectorXd w = bra.grid.weights();
    cx acc = 0.0;
    for (int k = 0; k < bra.grid.n_points; ++k)
        acc += std::conj(bra.values[k]) * ket.values[k] * w[k];
    return acc * bra.grid.dx;
}

inline double norm_sq(const WaveField& f) {
    const Eigen::VectorXd w = f.grid.weights();
    double acc = 0.0;
    for (int k = 0; k < f.grid.n_points; ++k)
        acc += std::norm(f.values[k]) * w[k];
    return acc * f.grid.dx;
}

inline double norm(const WaveField& f) { return std::sqrt(norm_sq(f)); }

inline WaveField normalized(WaveField f) {
    const double n = norm(f);
    if (n == 0.0) throw Error("cannot normalize a zero field");
    f.values /= n;
    return f;
}

// Normalized Gaussian packet e^{i k x} e^{-(x-c)^2 / (2 sigma^2)}.
// sigma is the amplitude-envelope width; the |psi|^2 standard deviation is
// sigma / sqrt(2).
inline WaveField make_gaussian(const SpatialGrid& g, double center, double width,
                               double wavenumber, double time = 0.0) {
    if (!(width > 2.0 * g.dx))
        throw UnresolvedWidth("gaussian width must exceed 2*dx");
    WaveField f{g, Eigen::VectorXcd(g.n_points), time};
    for (int k = 0; k < g.n_points; ++k) {
        const double x = g.coordinate(k);
        const double u = (x - center) / width;
        f.values[k] = std::polar(std::exp(-0.5 * u * u), wavenumber * x);
    }
    if (!g.periodic()) {
        const double edge = std::max(std::abs(f.values[0]), std::abs(f.values[g.n_points - 1]));
        if (edge > 1e-10)
            throw Error("gaussian tail exceeds 1e-10 at hard-wall boundary");
    }
    return normalized(std::move(f));
}

// Delta-approximant used for position-like boundary states: a gaussian of
// width 3*dx (an exact position spike spreads instantly and is not
// representable).
inline WaveField make_narrow_peak(const SpatialGrid& g, double center, double time = 0.0) {
    return make_gaussian(g, center, 3.0 * g.dx, 0.0, time);
}

// Normalized e^{i k x} with k = 2*pi*mode / L; exact discrete eigenvector of
// the centered-difference and spectral derivative matrices.
inline WaveField make_plane_wave(const SpatialGrid& g, int mode_index, double time = 0.0) {
    if (!g.periodic())
        throw NonPeriodicGrid("plane waves require a periodic grid");
    if (2 * std::abs(mode_index) >= g.n_points)
        throw Error("plane-wave mode exceeds the grid's Nyquist limit");
    const double k = 2.0 * std::numbers::pi * mode_index / g.length();
    const double amp = 1.0 / std::sqrt(g.length());
    WaveField f{g, Eigen::VectorXcd(g.n_points), time};
    for (int j = 0; j < g.n_points; ++j)
        f.values[j] = std::polar(amp, k * g.coordinate(j));
    return f;
}

inline double plane_wave_k(const SpatialGrid& g, int mode_index) {
    return 2.0 * std::numbers::pi * mode_index / g.length();
}

// splitmix64; self-contained so seeded draws are identical on every platform.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double uniform_pm1(std::uint64_t& state) {
    return 2.0 * (splitmix64(state) >> 11) * 0x1.0p-53 - 1.0;
}

inline WaveField make_random_field(const SpatialGrid& g, std::uint64_t seed, double time = 0.0) {
    std::uint64_t s = seed;
    WaveField f{g, Eigen::VectorXcd(g.n_points), time};
    for (int k = 0; k < g.n_points; ++k) {
        const double re = uniform_pm1(s);
        const double im = uniform_pm1(s);
        f.values[k] = cx(re, im);
    }
    return normalized(std::move(f));
}

// Pointwise aperture projection. Not renormalized; the amplitude absorbs
// the loss.
inline WaveField apply_mask(const WaveField& f, const Eigen::VectorXd& mask) {
    if (mask.size() != f.grid.n_points)
        throw GridMismatch("mask length does not match grid");
    WaveField out = f;
    for (int k = 0; k < f.grid.n_points; ++k) out.values[k] *= mask[k];
    return out;
}

// 0/1 aperture array open on |x - c| <= halfwidth for each slit center.
inline Eigen::VectorXd slit_mask(const SpatialGrid& g, const std::vector<double>& centers,
                                 double halfwidth) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(g.n_points);
    for (int k = 0; k < g.n_points; ++k)
        for (double c : centers)
            if (std::abs(g.coordinate(k) - c) <= halfwidth) m[k] = 1.0;
    return m;
}

inline double centroid(const Eigen::VectorXd& weight_values, const SpatialGrid& g) {
    double wsum = 0.0, xsum = 0.0;
    for (int k = 0; k < g.n_points; ++k) {
        wsum += weight_values[k];
        xsum += weight_values[k] * g.coordinate(k);
    }
    return xsum / wsum;
}

// Gaussian-sigma-convention envelope width: sqrt(2) * std of |psi|^2, so a
// packet built by make_gaussian(width = s) reports s.
inline double envelope_width(const WaveField& f) {
    Eigen::VectorXd w(f.grid.n_points);
    for (int k = 0; k < f.grid.n_points; ++k) w[k] = std::norm(f.values[k]);
    const double mean = centroid(w, f.grid);
    double wsum = 0.0, var = 0.0;
    for (int k = 0; k < f.grid.n_points; ++k) {
        const double d = f.grid.coordinate(k) - mean;
        wsum += w[k];
        var += w[k] * d * d;
    }
    return std::sqrt(2.0 * var / wsum);
}

// --- two-particle configuration-space field -------------------------------

enum class Symmetry { none, symmetric, antisymmetric };

inline std::string to_string(Symmetry s) {
    switch (s) {
        case Symmetry::symmetric: return "symmetric";
        case Symmetry::antisymmetric: return "antisymmetric";
        default: return "none";
    }
}

struct TwoParticleField {
    SpatialGrid grid;                 // same grid for both coordinates
    Eigen::MatrixXcd values;          // values(j, k) = psi(x_j, x'_k)
    double time = 0.0;
    Symmetry symmetry = Symmetry::none;
};

inline cx inner_product(const TwoParticleField& bra, const TwoParticleField& ket) {
    require_same_grid(bra.grid, ket.grid);
    if (std::abs(bra.time - ket.time) > time_tag_tol)
        throw TimeMismatch("inner product of two-particle fields at different times");
    const Eigen::VectorXd w = bra.grid.weights();
    cx acc = 0.0;
    for (int j = 0; j < bra.grid.n_points; ++j)
        for (int k = 0; k < bra.grid.n_points; ++k)
            acc += std::conj(bra.values(j, k)) * ket.values(j, k) * w[j] * w[k];
    return acc * bra.grid.dx * bra.grid.dx;
}

inline double norm(const TwoParticleField& f) {
    return std::sqrt(std::abs(inner_product(f, f)));
}

inline TwoParticleField combine_pair(const WaveField& a, const WaveField& b, double sign) {
    require_same_grid(a.grid, b.grid);
    if (std::abs(a.time - b.time) > time_tag_tol)
        throw TimeMismatch("pair constituents carry different time tags");
    const int n = a.grid.n_points;
    TwoParticleField out{a.grid, Eigen::MatrixXcd(n, n), a.time,
                         sign < 0 ? Symmetry::antisymmetric : Symmetry::symmetric};
    const double isqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            out.values(j, k) =
                isqrt2 * (a.values[j] * b.values[k] + sign * a.values[k] * b.values[j]);
    return out;
}

// (1/sqrt(2)) [a(x) b(x') - a(x') b(x)]
inline TwoParticleField antisymmetrize(const WaveField& a, const WaveField& b) {
    return combine_pair(a, b, -1.0);
}
inline TwoParticleField symmetrize(const WaveField& a, const WaveField& b) {
    return combine_pair(a, b, +1.0);
}

inline TwoParticleField product_pair(const WaveField& a, const WaveField& b) {
    require_same_grid(a.grid, b.grid);
    const int n = a.grid.n_points;
    TwoParticleField out{a.grid, Eigen::MatrixXcd(n, n), a.time, Symmetry::none};
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) out.values(j, k) = a.values[j] * b.values[k];
    return out;
}

inline double symmetry_defect(const TwoParticleField& f) {
    const double sign = f.symmetry == Symmetry::antisymmetric ? -1.0 : 1.0;
    if (f.symmetry == Symmetry::none) return 0.0;
    double worst = 0.0;
    for (int j = 0; j < f.grid.n_points; ++j)
        for (int k = 0; k < f.grid.n_points; ++k)
            worst = std::max(worst, std::abs(f.values(j, k) - sign * f.values(k, j)));
    return worst;
}

} // namespace biwave
