#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dscatter/rng.hpp"
#include "dscatter/symbol.hpp"

namespace dscatter {

// ---------------------------------------------------------------------------
// Physical-space randomization: partition of unity over unit lattice cells,
// independent mean-zero matrix per cell.
//
// chi is the standard smooth transition bump: 1 on |x|<1, 0 on |x|>2, glued
// with s(t) = e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}). Cells sit at integer
// coordinates in physical units regardless of grid resolution; distances are
// torus min-image.
// ---------------------------------------------------------------------------

inline double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

inline double bump_chi(double r) {
    r = std::abs(r);
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    return 1.0 - smooth_step(r - 1.0);
}

struct BumpPartition {
    Grid grid;
    std::vector<std::array<int, 3>> cells;   // signed integer cell coordinates
    std::vector<double> denom;               // sum_l chi(x - l) at every grid point
    bool coarse_grid = false;                // grid resolves the bump with < 4 pts per unit

    // iterate the support block of one cell: fn(point_index, chi_value)
    template <class Fn>
    void for_cell_support(const std::array<int, 3>& cell, Fn&& fn) const {
        const int n = grid.points_per_axis;
        const double dx = grid.dx();
        std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
        for (int a = 0; a < grid.dim; ++a) {
            lo[static_cast<std::size_t>(a)] =
                static_cast<int>(std::ceil((cell[static_cast<std::size_t>(a)] - 2.0) / dx));
            hi[static_cast<std::size_t>(a)] =
                static_cast<int>(std::floor((cell[static_cast<std::size_t>(a)] + 2.0) / dx));
        }
        std::array<int, 3> j{0, 0, 0};
        auto wrap = [n](int v) {
            int m = v % n;
            return m < 0 ? m + n : m;
        };
        for (j[0] = lo[0]; j[0] <= hi[0]; ++j[0]) {
            const double d0 = j[0] * dx - cell[0];
            for (j[1] = lo[1]; j[1] <= (grid.dim > 1 ? hi[1] : lo[1]); ++j[1]) {
                const double d1 = grid.dim > 1 ? j[1] * dx - cell[1] : 0.0;
                for (j[2] = lo[2]; j[2] <= (grid.dim > 2 ? hi[2] : lo[2]); ++j[2]) {
                    const double d2 = grid.dim > 2 ? j[2] * dx - cell[2] : 0.0;
                    const double r = std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
                    if (r >= 2.0) continue;
                    std::array<int, 3> iv{wrap(j[0]), grid.dim > 1 ? wrap(j[1]) : 0,
                                          grid.dim > 2 ? wrap(j[2]) : 0};
                    fn(grid.ravel(iv), bump_chi(r));
                }
            }
        }
    }
};

// strict=true enforces the >= 4 points-per-lattice-unit resolution rule; a
// coarse grid is accepted with strict=false and flagged in the metadata.
inline BumpPartition build_partition(const Grid& grid, bool strict = true) {
    if (grid.box_length < 8.0)
        throw ConfigError("partition: box must be at least 8 lattice units to contain one full bump");
    BumpPartition part{grid, {}, std::vector<double>(grid.npoints(), 0.0), false};
    if (grid.dx() > 0.25 + 1e-12) {
        if (strict)
            throw ConfigError("partition: grid must resolve the bump (>= 4 points per lattice unit); "
                              "pass strict=false to override");
        part.coarse_grid = true;
    }

    const double L = grid.box_length;
    const int kmin = static_cast<int>(std::ceil(-L / 2.0));
    const int kmax = static_cast<int>(std::ceil(L / 2.0)) - 1;
    std::array<int, 3> k{0, 0, 0};
    for (k[0] = kmin; k[0] <= kmax; ++k[0])
        for (k[1] = grid.dim > 1 ? kmin : 0; k[1] <= (grid.dim > 1 ? kmax : 0); ++k[1])
            for (k[2] = grid.dim > 2 ? kmin : 0; k[2] <= (grid.dim > 2 ? kmax : 0); ++k[2])
                part.cells.push_back(k);

    for (const auto& cell : part.cells)
        part.for_cell_support(cell, [&](std::size_t idx, double chi) { part.denom[idx] += chi; });
    for (double v : part.denom)
        if (!(v > 0.0)) throw ConfigError("partition: uncovered grid point (box/lattice mismatch)");
    return part;
}

// diagnostic: sum_k chi_k at every grid point (must be identically 1)
inline std::vector<double> partition_sum(const BumpPartition& part) {
    std::vector<double> s(part.grid.npoints(), 0.0);
    for (const auto& cell : part.cells)
        part.for_cell_support(cell, [&](std::size_t idx, double chi) {
            s[idx] += chi / part.denom[idx];
        });
    return s;
}

struct RandomizedMeta {
    std::string law;
    double law_param = 0.0;
    std::uint64_t seed = 0;
    bool zero_mode_dropped = false;
    bool coarse_grid = false;
};

struct RandomizedField {
    SpectralField field;
    RandomizedMeta meta;
};

// u^omega(x) = sum_k chi_k(x) G_k(omega) u(x), cell by cell, deterministic in
// the seed. The input must be in the physical view.
inline RandomizedField randomize_l2(const SpectralField& profile, const CoefficientLaw& law,
                                    std::uint64_t seed, const BumpPartition& part) {
    require_same_grid(profile.grid(), part.grid, "randomize_l2");
    if (profile.view() != View::physical) throw ConfigError("randomize_l2: profile must be physical view");

    const int N = profile.components();
    RandomMatrixDraw draw{seed, law, N};
    SpectralField out(profile.grid(), N, View::physical);

    std::vector<double> G(static_cast<std::size_t>(N) * N);
    for (const auto& cell : part.cells) {
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                G[static_cast<std::size_t>(a) * N + b] = draw.entry(cell, a, b);
        part.for_cell_support(cell, [&](std::size_t idx, double chi) {
            const double w = chi / part.denom[idx];
            for (int a = 0; a < N; ++a) {
                Complex acc(0.0, 0.0);
                for (int b = 0; b < N; ++b)
                    acc += G[static_cast<std::size_t>(a) * N + b] * profile.comp(b)[idx];
                out.comp(a)[idx] += w * acc;
            }
        });
    }
    return {std::move(out),
            {law.name(), law.param, seed, false, part.coarse_grid}};
}

// phi^{omega,1} = |nabla|^{-1} (|nabla| phi)^omega ; the torus zero mode of
// |nabla|^{-1} is projected out and flagged.
inline RandomizedField randomize_h1dot(const SpectralField& profile, const CoefficientLaw& law,
                                       std::uint64_t seed, const BumpPartition& part) {
    if (profile.components() != 1) throw ConfigError("randomize_h1dot: profile must be single-component");
    FourierSymbol grad_mag{[](const Wavevector& xi) { return Complex(norm(xi)); },
                           ZeroModePolicy::keep};
    FourierSymbol grad_mag_inv{[](const Wavevector& xi) { return Complex(1.0 / norm(xi)); },
                               ZeroModePolicy::zero};
    SpectralField sharp = apply_symbol(profile.in_view(View::physical), grad_mag);
    RandomizedField r = randomize_l2(sharp, law, seed, part);
    r.field = apply_symbol(r.field, grad_mag_inv);
    r.meta.zero_mode_dropped = true;
    return r;
}

}  // namespace dscatter
