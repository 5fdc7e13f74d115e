#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "dscatter/errors.hpp"

namespace dscatter {

using Wavevector = std::array<double, 3>;  // unused trailing axes are 0

// Periodic grid: d axes, n points per axis, physical period L per axis.
// Frequency lattice per axis: {2*pi*k/L : k = -n/2 .. n/2-1}.
struct Grid {
    int dim = 1;
    int points_per_axis = 0;
    double box_length = 0.0;

    Grid() = default;
    Grid(int d, int n, double L) : dim(d), points_per_axis(n), box_length(L) {
        if (d < 1 || d > 3) throw ConfigError("grid: dim must be 1, 2 or 3");
        if (n <= 0 || n % 2 != 0) throw ConfigError("grid: points_per_axis must be even and positive");
        if (!(L > 0.0)) throw ConfigError("grid: box_length must be positive");
    }

    std::size_t npoints() const {
        std::size_t p = 1;
        for (int a = 0; a < dim; ++a) p *= static_cast<std::size_t>(points_per_axis);
        return p;
    }
    double dx() const { return box_length / points_per_axis; }
    double cell_volume() const { return std::pow(dx(), dim); }
    double volume() const { return std::pow(box_length, dim); }

    // signed lattice index for axis position i in [0,n)
    int signed_index(int i) const { return i <= points_per_axis / 2 - 1 ? i : i - points_per_axis; }
    double frequency(int i) const {
        return 2.0 * std::numbers::pi * signed_index(i) / box_length;
    }
    double coordinate(int i) const { return signed_index(i) * dx(); }
    double nyquist() const { return std::numbers::pi / dx(); }

    // decompose linear (row-major) index into per-axis indices
    std::array<int, 3> unravel(std::size_t idx) const {
        std::array<int, 3> out{0, 0, 0};
        const int n = points_per_axis;
        for (int a = dim - 1; a >= 0; --a) {
            out[static_cast<std::size_t>(a)] = static_cast<int>(idx % n);
            idx /= n;
        }
        return out;
    }
    std::size_t ravel(const std::array<int, 3>& iv) const {
        std::size_t idx = 0;
        for (int a = 0; a < dim; ++a) idx = idx * points_per_axis + static_cast<std::size_t>(iv[static_cast<std::size_t>(a)]);
        return idx;
    }

    Wavevector wavevector(const std::array<int, 3>& iv) const {
        Wavevector xi{0.0, 0.0, 0.0};
        for (int a = 0; a < dim; ++a) xi[static_cast<std::size_t>(a)] = frequency(iv[static_cast<std::size_t>(a)]);
        return xi;
    }
    Wavevector position(const std::array<int, 3>& iv) const {
        Wavevector x{0.0, 0.0, 0.0};
        for (int a = 0; a < dim; ++a) x[static_cast<std::size_t>(a)] = coordinate(iv[static_cast<std::size_t>(a)]);
        return x;
    }

    bool operator==(const Grid& o) const {
        return dim == o.dim && points_per_axis == o.points_per_axis && box_length == o.box_length;
    }
};

inline double norm2(const Wavevector& v) {
    return v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
}
inline double norm(const Wavevector& v) { return std::sqrt(norm2(v)); }

inline void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) throw ConfigError(std::string(what) + ": grid mismatch");
}

}  // namespace dscatter
