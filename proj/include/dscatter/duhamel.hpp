#pragma once

#include <utility>
#include <vector>

#include "dscatter/norms.hpp"

namespace dscatter {

struct Trajectory {
    TimeGrid grid;
    std::vector<double> times;
    std::vector<SpectralField> fields;  // physical view

    Trajectory() = default;
    explicit Trajectory(const TimeGrid& tg) : grid(tg), times(tg.times()) {}

    std::size_t size() const { return fields.size(); }
};

// free trajectory t -> exp(-i t omega) phi sampled on the grid
inline Trajectory free_trajectory(const SpectralField& phi, const Dispersion& omega,
                                  const TimeGrid& tg) {
    Trajectory traj(tg);
    SpectralField phat = phi.in_view(View::frequency);
    traj.fields.reserve(traj.times.size());
    for (double t : traj.times) {
        SpectralField f = phat;
        phase_multiply_in_place(f, omega, t);
        f.to_physical();
        traj.fields.push_back(std::move(f));
    }
    return traj;
}

struct DuhamelResult {
    Trajectory traj;
    double quad_error = 0.0;  // L2 half-resolution comparison at the left endpoint
};

// i int_t^{Tmax} U(t-s) F(s) ds for t on the grid, via the interaction
// picture: G(s) = U(-s) F(s) accumulated right-to-left by the log-trapezoid
// rule, then one propagator application per output time. O(n_time) propagator
// applications in total.
inline DuhamelResult duhamel_backward(const Trajectory& F, const Dispersion& omega) {
    const std::size_t m = F.size();
    if (m < 2) throw ConfigError("duhamel_backward: need at least 2 nodes");
    for (const SpectralField& f : F.fields)
        if (!f.all_finite()) throw NumericalError("duhamel_backward: non-finite nonlinearity input");

    const std::vector<double>& s = F.times;
    const double du = F.grid.du();

    // G_j = U(-s_j) F_j in the frequency view
    std::vector<SpectralField> G;
    G.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        SpectralField g = F.fields[j].in_view(View::frequency);
        phase_multiply_in_place(g, omega, -s[j]);
        G.push_back(std::move(g));
    }

    // cumulative integral from the right; I_j = int_{s_j}^{Tmax} G ds
    // (log-trapezoid: ds = s du). Also the half-resolution accumulation for
    // the quadrature error estimate at the left endpoint.
    std::vector<SpectralField> I;
    I.resize(m);
    I[m - 1] = G[m - 1];
    I[m - 1] *= 0.0;
    for (std::size_t j = m - 1; j-- > 0;) {
        I[j] = I[j + 1];
        I[j].axpy(0.5 * du * s[j], G[j]);
        I[j].axpy(0.5 * du * s[j + 1], G[j + 1]);
    }

    double quad_err = 0.0;
    {
        std::vector<std::size_t> coarse;
        for (std::size_t j = 0; j < m; j += 2) coarse.push_back(j);
        if (coarse.back() != m - 1) coarse.push_back(m - 1);
        SpectralField half = G[0];
        half *= 0.0;
        for (std::size_t k = 0; k + 1 < coarse.size(); ++k) {
            const std::size_t a = coarse[k], b = coarse[k + 1];
            const double duk = du * static_cast<double>(b - a);
            half.axpy(0.5 * duk * s[a], G[a]);
            half.axpy(0.5 * duk * s[b], G[b]);
        }
        SpectralField diff = half;
        diff -= I[0];
        quad_err = diff.l2_norm();
    }

    DuhamelResult out;
    out.traj = Trajectory(F.grid);
    out.traj.fields.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        SpectralField v = std::move(I[j]);
        phase_multiply_in_place(v, omega, s[j]);
        v *= Complex(0.0, 1.0);
        v.to_physical();
        out.traj.fields.push_back(std::move(v));
    }
    out.quad_error = quad_err;
    return out;
}

}  // namespace dscatter
