#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "dscatter/errors.hpp"

namespace dscatter {

// Counter-based randomness: every draw is a pure function of a 64-bit key
// chain, so results do not depend on evaluation order, worker count, or cell
// enumeration. splitmix64 finalizer chains are statistically adequate here.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_key(std::uint64_t h, std::uint64_t v) {
    return splitmix64(h ^ (0x9e3779b97f4a7c15ULL + v));
}

template <class... Rest>
inline std::uint64_t mix_key(std::uint64_t h, std::uint64_t v, Rest... rest) {
    return mix_key(mix_key(h, v), rest...);
}

inline double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0,1)
}

// standard normal from one key (Box-Muller, fixed two-uniform budget)
inline double standard_normal(std::uint64_t key) {
    const double u1 = uniform01(splitmix64(key));
    const double u2 = uniform01(splitmix64(key ^ 0xdeadbeefcafef00dULL));
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

// Mean-zero coefficient law with the exponential-moment bound
// E exp(gamma g) <= exp(C gamma^2); C is sigma/2 for gaussian(variance sigma)
// and a^2/2 for the bounded families.
struct CoefficientLaw {
    enum class Family { gaussian, uniform, rademacher, identity };

    Family family = Family::gaussian;
    double param = 1.0;  // gaussian: variance; uniform: half-width a

    static CoefficientLaw gaussian(double variance = 1.0) {
        if (!(variance > 0.0)) throw ConfigError("law: gaussian variance must be positive");
        return {Family::gaussian, variance};
    }
    static CoefficientLaw uniform(double halfwidth) {
        if (!(halfwidth > 0.0)) throw ConfigError("law: uniform half-width must be positive");
        return {Family::uniform, halfwidth};
    }
    static CoefficientLaw uniform_unit_variance() { return uniform(std::sqrt(3.0)); }
    static CoefficientLaw rademacher() { return {Family::rademacher, 1.0}; }
    // G_k = I deterministic mode, for tests and baselines only
    static CoefficientLaw identity() { return {Family::identity, 1.0}; }

    double sample(std::uint64_t key) const {
        switch (family) {
            case Family::gaussian: return std::sqrt(param) * standard_normal(key);
            case Family::uniform: return param * (2.0 * uniform01(splitmix64(key)) - 1.0);
            case Family::rademacher: return (splitmix64(key) & 1ULL) ? 1.0 : -1.0;
            case Family::identity: return 1.0;  // diagonal handled by the matrix draw
        }
        return 0.0;
    }

    double variance() const {
        switch (family) {
            case Family::gaussian: return param;
            case Family::uniform: return param * param / 3.0;
            case Family::rademacher: return 1.0;
            case Family::identity: return 0.0;
        }
        return 0.0;
    }

    double mgf_constant() const {
        switch (family) {
            case Family::gaussian: return 0.5 * param;
            case Family::uniform: return 0.5 * param * param;
            case Family::rademacher: return 0.5;
            case Family::identity: return 0.0;
        }
        return 0.0;
    }

    std::string name() const {
        switch (family) {
            case Family::gaussian: return "gaussian";
            case Family::uniform: return "uniform";
            case Family::rademacher: return "rademacher";
            case Family::identity: return "identity";
        }
        return "?";
    }

    static CoefficientLaw from_name(const std::string& n, double param) {
        if (n == "gaussian") return gaussian(param);
        if (n == "uniform") return uniform(param);
        if (n == "rademacher") return rademacher();
        if (n == "identity") return identity();
        throw ConfigError("law: unknown family '" + n + "'");
    }
};

// Reproducible per-cell N x N real matrix draw; the key is built from the
// signed integer cell coordinates and the entry indices, never from the cell
// enumeration order.
struct RandomMatrixDraw {
    std::uint64_t seed = 0;
    CoefficientLaw law;
    int ncomp = 1;

    double entry(const std::array<int, 3>& cell, int a, int b) const {
        if (law.family == CoefficientLaw::Family::identity) return a == b ? 1.0 : 0.0;
        const std::uint64_t key =
            mix_key(seed, 0x72616e646d617472ULL, static_cast<std::uint64_t>(cell[0] + (1 << 20)),
                    static_cast<std::uint64_t>(cell[1] + (1 << 20)),
                    static_cast<std::uint64_t>(cell[2] + (1 << 20)),
                    static_cast<std::uint64_t>(a * 4096 + b));
        return law.sample(key);
    }
};

// per-member seed derivation for ensembles (scheduling-independent)
inline std::uint64_t member_seed(std::uint64_t master, std::uint64_t index) {
    return mix_key(master, 0x656e73656d626c65ULL, index);
}

}  // namespace dscatter
