#pragma once

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "dscatter/duhamel.hpp"
#include "dscatter/fit.hpp"
#include "dscatter/solver.hpp"

namespace dscatter {

// ---------------------------------------------------------------------------
// Gross-Pitaevskii final-data machinery for u = psi - 1.
//
// The quadratic transform M(u) = u1 + i U u2 + (2-Delta)^{-1}|u|^2 turns the
// linearized flow into the unitary group exp(-itH), H = sqrt(-Delta(2-Delta)),
// with zeta = U^{-1} M(u). Solving U phi = M(u) for u is the contraction
//   u = (U phi1 + i phi2) - (2-Delta)^{-1}|u|^2,
// the sign of the quadratic term being forced by M itself (the round trip
// M(g(phi)) = U phi pins it).
// ---------------------------------------------------------------------------

namespace gpdetail {

inline SpectralField real_part(const SpectralField& f) {
    SpectralField out = f.in_view(View::physical);
    for (Complex& z : out.raw()) z = Complex(z.real(), 0.0);
    return out;
}
inline SpectralField imag_part(const SpectralField& f) {
    SpectralField out = f.in_view(View::physical);
    for (Complex& z : out.raw()) z = Complex(z.imag(), 0.0);
    return out;
}
inline SpectralField abs_squared(const SpectralField& f) {
    SpectralField out = f.in_view(View::physical);
    for (Complex& z : out.raw()) z = Complex(std::norm(z), 0.0);
    return out;
}

inline const CombinedSymbol& sym_U() {
    static const CombinedSymbol s = combined_symbol({{GpOp::U, 1.0}});
    return s;
}
inline const CombinedSymbol& sym_B2() {
    static const CombinedSymbol s = combined_symbol({{GpOp::InvTwoMinusDelta, 1.0}});
    return s;
}
inline const CombinedSymbol& sym_hinv_div() {
    static const CombinedSymbol s = combined_symbol({{GpOp::HinvDiv, 1.0}});
    return s;
}
// <nabla>^{-1} |nabla|^{-1}, the quadratic correction in v = zeta - ...
inline const CombinedSymbol& sym_corr() {
    static const CombinedSymbol s =
        combined_symbol({{GpOp::Bessel, -1.0}, {GpOp::AbsGrad, -1.0}});
    return s;
}

}  // namespace gpdetail

inline SpectralField transform_M(const SpectralField& u) {
    if (u.components() != 1) throw ConfigError("transform_M: single-component field required");
    SpectralField u1 = gpdetail::real_part(u);
    SpectralField u2 = gpdetail::imag_part(u);
    SpectralField rho = gpdetail::abs_squared(u);
    SpectralField Uu2 = gpdetail::real_part(apply_combined(u2, gpdetail::sym_U()));
    SpectralField B2rho = gpdetail::real_part(apply_combined(rho, gpdetail::sym_B2()));

    SpectralField out = u1;
    out += B2rho;
    out.axpy(Complex(0.0, 1.0), Uu2);
    return out;
}

struct GpInversion {
    SpectralField u;
    int iterations = 0;
    double final_update = 0.0;    // L3 norm of the last update
    double contraction = 0.0;     // last observed update ratio
    double phi_l3 = 0.0;
};

// default smallness threshold for ||phi||_{L3}. The paper provides no
// numerical value; calibrate_eta_star reports ~8-18 on desk-scale grids
// (contraction factor <= 1/2), and the frozen default keeps a 2x margin
// below the smallest calibrated value.
inline constexpr double kEtaStarDefault = 4.0;

inline GpInversion invert_g(const SpectralField& phi, double eta_star = kEtaStarDefault,
                            double tol = 1e-12, int max_iter = 50) {
    if (phi.components() != 1) throw ConfigError("invert_g: single-component field required");
    GpInversion res;
    res.phi_l3 = lp_norm_x(phi, 3.0);
    if (res.phi_l3 > eta_star) {
        std::ostringstream msg;
        msg << "invert_g: ||phi||_L3 = " << res.phi_l3 << " exceeds eta_star = " << eta_star;
        throw PreconditionError(msg.str());
    }

    SpectralField phi1 = gpdetail::real_part(phi);
    SpectralField phi2 = gpdetail::imag_part(phi);
    SpectralField phitilde = gpdetail::real_part(apply_combined(phi1, gpdetail::sym_U()));
    phitilde.axpy(Complex(0.0, 1.0), phi2);

    SpectralField u = phitilde;  // first iterate from u=0
    double prev_update = lp_norm_x(u, 3.0);
    res.iterations = 1;
    for (int it = 1; it < max_iter; ++it) {
        SpectralField nextu = phitilde;
        SpectralField corr =
            gpdetail::real_part(apply_combined(gpdetail::abs_squared(u), gpdetail::sym_B2()));
        nextu.axpy(-1.0, corr);
        SpectralField diff = nextu;
        diff -= u;
        const double upd = lp_norm_x(diff, 3.0);
        u = std::move(nextu);
        res.iterations = it + 1;
        if (prev_update > 0.0) {
            res.contraction = upd / prev_update;
            if (res.contraction >= 1.0)
                throw PreconditionError("invert_g: iteration not contracting (phi too large)");
        }
        prev_update = upd;
        res.final_update = upd;
        if (upd <= tol) break;
    }
    if (res.final_update > tol)
        throw PreconditionError("invert_g: no convergence to tol within max_iter");
    res.u = std::move(u);
    return res;
}

// N(u) = 2 u1^2 + |u|^2 u1 - i H^{-1} nabla.{ 4 u1 grad u2 + grad(|u|^2 u2) }
inline SpectralField eval_N(const SpectralField& u) {
    if (u.components() != 1) throw ConfigError("eval_N: single-component field required");
    const Grid& g = u.grid();
    SpectralField up = u.in_view(View::physical);
    const std::size_t npts = g.npoints();

    SpectralField u1 = gpdetail::real_part(up);
    SpectralField u2 = gpdetail::imag_part(up);
    SpectralField rho = gpdetail::abs_squared(up);

    SpectralField rho_u2(g, 1, View::physical);
    for (std::size_t i = 0; i < npts; ++i)
        rho_u2.comp(0)[i] = rho.comp(0)[i].real() * u2.comp(0)[i].real();

    std::vector<SpectralField> W;
    W.reserve(static_cast<std::size_t>(g.dim));
    for (int axis = 0; axis < g.dim; ++axis) {
        SpectralField w = spectral_gradient(u2, axis);
        w.to_physical();
        for (std::size_t i = 0; i < npts; ++i)
            w.comp(0)[i] *= 4.0 * u1.comp(0)[i].real();
        SpectralField gr = spectral_gradient(rho_u2, axis);
        gr.to_physical();
        w += gr;
        W.push_back(std::move(w));
    }
    SpectralField div = divergence_with_radial(W, gpdetail::sym_hinv_div());

    SpectralField out(g, 1, View::physical);
    for (std::size_t i = 0; i < npts; ++i) {
        const double a = u1.comp(0)[i].real();
        const double r = rho.comp(0)[i].real();
        out.comp(0)[i] = Complex(2.0 * a * a + r * a, 0.0) - Complex(0.0, 1.0) * div.comp(0)[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Backward Picard solve for zeta: Psi(w) = zeta0 + i int_t^Tmax e^{-i(t-s)H} N(g(w)) ds
// ---------------------------------------------------------------------------

struct GpSolverConfig {
    double T = 1.0;
    double Tmax = 12.0;
    int n_time = 64;
    double tol = 1e-5;
    int max_iter = 25;
    double eta_target = 0.2;
    double epsilon = 5.0 / 16.0;  // in (1/4, 3/8)
    double q = 4.0, r = 3.0;      // admissible in d=3, r in [12/5, 4]
    double eta_star = kEtaStarDefault;
    // The horizon stays fixed during the scan: on the torus the free norms
    // plateau after wrap-around, so decay in T cannot be bought by growing
    // Tmax; smallness comes from the datum. The scan stops at Tmax/4.
    bool scan_T = true;

    void validate() const {
        if (!(T >= 1.0)) throw ConfigError("gp solver: T must be >= 1");
        if (!(Tmax > T)) throw ConfigError("gp solver: Tmax must exceed T");
        if (!(epsilon > 0.25 && epsilon < 0.375))
            throw ConfigError("gp solver: epsilon must lie in (1/4, 3/8)");
        if (!(r >= 12.0 / 5.0 - 1e-12 && r <= 4.0 + 1e-12))
            throw ConfigError("gp solver: r must lie in [12/5, 4]");
        if (!check_admissible(3, q, r).admissible)
            throw ConfigError("gp solver: (q,r) must be admissible in d=3");
        if (!(tol > 0.0)) throw ConfigError("gp solver: tol must be positive");
    }
};

struct GpReport {
    double T = 0.0, Tmax = 0.0;
    int n_time = 0;
    double epsilon = 0.0, q = 0.0, r = 0.0;
    double eta_star = 0.0, eta_target = 0.0, tol = 0.0;
    double eta_free = 0.0;          // smallness sum at the accepted T
    double eta_free_grad = 0.0;     // <nabla>-weighted piece
    double eta_free_l3 = 0.0;       // X^{inf,3}_0 piece
    bool zero_mode_dropped = true;
    std::vector<double> update_norms;
    std::vector<double> contraction_ratios;
    bool converged = false;
    int iterations = 0;
    double final_update = 0.0;
    double residual_self = 0.0;
    double residual_doubled = 0.0;
    double eps0 = 0.0;  // -eps + 1/q0-style decay margin of the (q,r) choice
    std::string flags;
    std::string failure;
    double wall_seconds = 0.0;
};

struct GpSolveOutcome {
    bool ok = false;
    Trajectory zeta;      // fixed point
    Trajectory u;         // g(zeta)
    Trajectory zeta_free; // e^{-itH} zeta_plus on the grid
    GpReport report;
};

namespace gpdetail {

struct GpNorm {
    double eps, q, r;
    double operator()(const std::vector<double>& ts, const std::vector<SpectralField>& fs) const {
        std::vector<SpectralField> graded;
        graded.reserve(fs.size());
        const CombinedSymbol bessel = combined_symbol({{GpOp::Bessel, 1.0}});
        for (const SpectralField& f : fs) graded.push_back(apply_combined(f, bessel));
        WeightedNormSpec a{kInf, 2.0, eps, ts.front(), ts, QuadRule::simpson};
        WeightedNormSpec b{q, r, eps, ts.front(), ts, QuadRule::simpson};
        return std::max(weighted_spacetime_norm(ts, graded, a).value,
                        weighted_spacetime_norm(ts, graded, b).value);
    }
    double diff(const std::vector<double>& ts, const std::vector<SpectralField>& fa,
                const std::vector<SpectralField>& fb) const {
        std::vector<SpectralField> d;
        d.reserve(fa.size());
        for (std::size_t j = 0; j < fa.size(); ++j) {
            SpectralField x = fa[j];
            x -= fb[j];
            d.push_back(std::move(x));
        }
        return (*this)(ts, d);
    }
};

// one application of Psi minus the free part: i int e^{-i(t-s)H} N(g(w)) ds.
// Throws PreconditionError when an iterate leaves the g-threshold ball.
inline DuhamelResult apply_psi_integral(const Trajectory& w, double eta_star) {
    Trajectory F(w.grid);
    F.fields.reserve(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        GpInversion inv = invert_g(w.fields[j], eta_star);
        F.fields.push_back(eval_N(inv.u));
    }
    return duhamel_backward(F, gp_dispersion());
}

}  // namespace gpdetail

inline GpSolveOutcome gp_picard_solve_outcome(const SpectralField& zeta_plus,
                                              const GpSolverConfig& cfg,
                                              const Trajectory* w_init = nullptr) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();
    GpSolveOutcome out;
    GpReport& rep = out.report;
    rep.epsilon = cfg.epsilon;
    rep.q = cfg.q;
    rep.r = cfg.r;
    rep.eta_star = cfg.eta_star;
    rep.eta_target = cfg.eta_target;
    rep.tol = cfg.tol;
    rep.n_time = cfg.n_time;
    rep.eps0 = -cfg.epsilon + (1.5 - 3.0 / cfg.r - 1.0 / cfg.q);
    if (rep.eps0 <= 0.0)
        rep.flags += "[eps0 <= 0 at the chosen (q,r): the graded free norm grows with Tmax]";

    const Dispersion omega = gp_dispersion();
    const CombinedSymbol bessel = combined_symbol({{GpOp::Bessel, 1.0}});
    SpectralField graded_plus = apply_combined(zeta_plus, bessel);

    // smallness scan on a shared master grid, fixed horizon
    double T = cfg.T;
    {
        TimeGrid master(cfg.T, cfg.Tmax, 2 * cfg.n_time);
        Trajectory zfree = free_trajectory(zeta_plus, omega, master);
        Trajectory gfree = free_trajectory(graded_plus, omega, master);
        std::vector<double> y_r(zfree.size()), y_3(zfree.size());
        for (std::size_t j = 0; j < zfree.size(); ++j) {
            y_r[j] = lp_norm_x(gfree.fields[j], cfg.r);
            y_3[j] = lp_norm_x(zfree.fields[j], 3.0);
        }
        while (true) {
            std::vector<double> ts_w, yr_w, y3_w;
            for (std::size_t j = 0; j < master.times().size(); ++j) {
                const double t = zfree.times[j];
                if (t >= T) {
                    ts_w.push_back(t);
                    yr_w.push_back(y_r[j]);
                    y3_w.push_back(y_3[j]);
                }
            }
            WeightedNormSpec sq{cfg.q, cfg.r, cfg.epsilon, T, ts_w, QuadRule::simpson};
            WeightedNormSpec s3{kInf, 3.0, 0.0, T, ts_w, QuadRule::simpson};
            rep.eta_free_grad = weighted_norm_from_samples(ts_w, yr_w, sq).value;
            rep.eta_free_l3 = weighted_norm_from_samples(ts_w, y3_w, s3).value;
            rep.eta_free = rep.eta_free_grad + rep.eta_free_l3;
            if (rep.eta_free <= cfg.eta_target || !cfg.scan_T) break;
            if (2.0 * T > 0.25 * cfg.Tmax) {
                std::ostringstream msg;
                msg << "gp solver: smallness precondition unsatisfiable for T up to Tmax/4 ("
                    << "eta=" << rep.eta_free << " > target " << cfg.eta_target
                    << "); shrink the datum or enlarge the box";
                rep.failure = msg.str();
                rep.T = T;
                return out;
            }
            T *= 2.0;
        }
    }
    const double Tmax = cfg.Tmax;
    TimeGrid tg(T, Tmax, cfg.n_time);
    rep.T = T;
    rep.Tmax = Tmax;

    Trajectory zeta0 = free_trajectory(zeta_plus, omega, tg);
    const gpdetail::GpNorm xnorm{cfg.epsilon, cfg.q, cfg.r};

    Trajectory w = zeta0;
    if (w_init) {
        if (w_init->size() != w.size())
            throw ConfigError("gp solver: initial trajectory does not match the grid");
        w.fields = w_init->fields;
    }

    double prev_update = -1.0;
    int bad_streak = 0;
    bool converged = false;
    for (int it = 0; it < cfg.max_iter; ++it) {
        DuhamelResult integral = [&] {
            try {
                return gpdetail::apply_psi_integral(w, cfg.eta_star);
            } catch (const PreconditionError& e) {
                throw DivergenceError(std::string("gp solver: g-threshold violation mid-iteration: ") +
                                      e.what());
            }
        }();
        Trajectory w_new(tg);
        w_new.fields.reserve(w.size());
        for (std::size_t j = 0; j < w.size(); ++j) {
            SpectralField f = zeta0.fields[j];
            f += integral.traj.fields[j];
            w_new.fields.push_back(std::move(f));
        }
        const double upd = xnorm.diff(w.times, w_new.fields, w.fields);
        rep.update_norms.push_back(upd);
        if (prev_update > 0.0) {
            const double ratio = upd / prev_update;
            rep.contraction_ratios.push_back(ratio);
            bad_streak = ratio >= 1.0 ? bad_streak + 1 : 0;
            if (bad_streak >= 3) {
                rep.failure = "gp solver: contraction ratio >= 1 for 3 consecutive iterations";
                rep.iterations = it + 1;
                return out;
            }
        }
        w.fields = std::move(w_new.fields);
        rep.iterations = it + 1;
        prev_update = upd;
        if (upd <= cfg.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "gp solver: no convergence within max_iter=" << cfg.max_iter << " (last update "
            << prev_update << ")";
        rep.failure = msg.str();
        return out;
    }
    rep.final_update = prev_update;

    // residuals at the solver quadrature and at doubled nodes
    {
        auto psi_of = [&](const Trajectory& traj) {
            DuhamelResult integral = gpdetail::apply_psi_integral(traj, cfg.eta_star);
            Trajectory psi(traj.grid);
            psi.fields.reserve(traj.size());
            Trajectory z0 = free_trajectory(zeta_plus, omega, traj.grid);
            for (std::size_t j = 0; j < traj.size(); ++j) {
                SpectralField f = std::move(z0.fields[j]);
                f += integral.traj.fields[j];
                psi.fields.push_back(std::move(f));
            }
            return psi;
        };
        Trajectory psi_same = psi_of(w);
        rep.residual_self = xnorm.diff(w.times, psi_same.fields, w.fields);

        Trajectory w_fine = detail::interp_doubled(w);
        Trajectory psi_fine = psi_of(w_fine);
        std::vector<SpectralField> coarse;
        coarse.reserve(w.size());
        for (std::size_t j = 0; j < w.size(); ++j) coarse.push_back(std::move(psi_fine.fields[2 * j]));
        rep.residual_doubled = xnorm.diff(w.times, coarse, w.fields);
    }

    out.u = Trajectory(tg);
    out.u.fields.reserve(w.size());
    for (std::size_t j = 0; j < w.size(); ++j)
        out.u.fields.push_back(invert_g(w.fields[j], cfg.eta_star).u);

    out.zeta = std::move(w);
    out.zeta_free = std::move(zeta0);
    rep.converged = true;
    out.ok = true;
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

inline GpSolveOutcome gp_picard_solve(const SpectralField& zeta_plus, const GpSolverConfig& cfg) {
    GpSolveOutcome out = gp_picard_solve_outcome(zeta_plus, cfg);
    if (!out.ok) {
        if (out.report.failure.find("precondition") != std::string::npos)
            throw PreconditionError(out.report.failure);
        throw DivergenceError(out.report.failure);
    }
    return out;
}

inline double gp_uniqueness_probe(const SpectralField& zeta_plus, const GpSolveOutcome& ref,
                                  std::uint64_t seed = 23) {
    if (!ref.ok) throw ConfigError("gp_uniqueness_probe: reference run did not converge");
    const GpReport& r = ref.report;
    Trajectory start(TimeGrid(r.T, r.Tmax, r.n_time));
    start.fields.reserve(start.times.size());
    FourierSymbol lowpass{[](const Wavevector& xi) { return Complex(std::exp(-norm2(xi))); },
                          ZeroModePolicy::keep};
    for (std::size_t j = 0; j < start.times.size(); ++j) {
        SpectralField f(zeta_plus.grid(), 1, View::physical);
        auto data = f.comp(0);
        for (std::size_t i = 0; i < data.size(); ++i)
            data[i] = Complex(standard_normal(mix_key(seed, j, 2u * i)),
                              standard_normal(mix_key(seed, j, 2u * i + 1)));
        f = apply_symbol(f, lowpass);
        start.fields.push_back(std::move(f));
    }
    const gpdetail::GpNorm xnorm{r.epsilon, r.q, r.r};
    const double raw = xnorm.diff(start.times, start.fields,
                                  std::vector<SpectralField>(start.size(),
                                                             SpectralField(zeta_plus.grid(), 1)));
    const double target = 0.25 * r.eta_target;
    for (std::size_t j = 0; j < start.size(); ++j) {
        SpectralField f = ref.zeta_free.fields[j];
        SpectralField& pert = start.fields[j];
        pert *= target / raw;
        f += pert;
        start.fields[j] = std::move(f);
    }

    GpSolverConfig cfg2;
    cfg2.T = r.T;
    cfg2.Tmax = r.Tmax;
    cfg2.n_time = r.n_time;
    cfg2.tol = r.tol;
    cfg2.eta_target = r.eta_target;
    cfg2.epsilon = r.epsilon;
    cfg2.q = r.q;
    cfg2.r = r.r;
    cfg2.eta_star = r.eta_star;
    cfg2.scan_T = false;
    GpSolveOutcome alt = gp_picard_solve_outcome(zeta_plus, cfg2, &start);
    if (!alt.ok)
        throw DivergenceError("gp_uniqueness_probe: alternative start diverged: " + alt.report.failure);
    const gpdetail::GpNorm xn{r.epsilon, r.q, r.r};
    return xn.diff(ref.zeta.times, alt.zeta.fields, ref.zeta.fields);
}

// ---------------------------------------------------------------------------
// Scattering-rate verification (Theorem-4.5-style fits)
// ---------------------------------------------------------------------------

struct GpRateReport {
    std::vector<double> times;
    std::vector<double> zeta_diff_h1;  // ||zeta - e^{-itH} zeta+||_{H1}
    std::vector<double> v_diff_h1;     // ||v - e^{-itH} zeta+||_{H1}
    std::vector<double> correction_h1; // ||<nabla>^{-1}|nabla|^{-1}|u|^2||_{H1}
    FitResult zeta_fit, v_fit, corr_fit;
    bool fits_valid = false;
    bool zero_mode_dropped = true;
    double epsilon = 0.0;
};

inline GpRateReport gp_verify_rates(const Trajectory& zeta, const Trajectory& u,
                                    const SpectralField& zeta_plus, double epsilon) {
    if (zeta.size() != u.size() || zeta.size() == 0)
        throw ConfigError("gp_verify_rates: mismatched trajectories");
    GpRateReport rep;
    rep.times = zeta.times;
    rep.epsilon = epsilon;

    Trajectory zeta0 = free_trajectory(zeta_plus, gp_dispersion(), zeta.grid);
    for (std::size_t j = 0; j < zeta.size(); ++j) {
        SpectralField corr =
            apply_combined(gpdetail::abs_squared(u.fields[j]), gpdetail::sym_corr());
        SpectralField v = zeta.fields[j];
        v -= corr;

        SpectralField dz = zeta.fields[j];
        dz -= zeta0.fields[j];
        SpectralField dv = v;
        dv -= zeta0.fields[j];

        rep.zeta_diff_h1.push_back(h1_norm(dz));
        rep.v_diff_h1.push_back(h1_norm(dv));
        rep.correction_h1.push_back(h1_norm(corr));
    }

    const double Thalf = 0.5 * zeta.grid.Tmax;
    try {
        rep.zeta_fit = fit_power_law(rep.times, rep.zeta_diff_h1, zeta.grid.T, Thalf);
        rep.v_fit = fit_power_law(rep.times, rep.v_diff_h1, zeta.grid.T, Thalf);
        rep.corr_fit = fit_power_law(rep.times, rep.correction_h1, zeta.grid.T, Thalf);
        rep.fits_valid = true;
    } catch (const ConfigError&) {
        rep.fits_valid = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Forward split-step for the u-equation (weak-residual consistency checks):
//   i u_t + Delta u - 2 u1 = 3 u1^2 + u2^2 + |u|^2 u1 + i (2 u1 u2 + |u|^2 u2)
// The R-linear part diagonalizes per mode on (u1_hat, u2_hat) with rotation
// frequency H; the zero mode is the Jordan block (u1 fixed, u2 -= 2 t u1).
// ---------------------------------------------------------------------------

namespace gpdetail {

inline void gp_linear_step(SpectralField& u, double h) {
    const Grid& g = u.grid();
    SpectralField u1 = real_part(u);
    SpectralField u2 = imag_part(u);
    u1.to_frequency();
    u2.to_frequency();
    auto a = u1.comp(0);
    auto b = u2.comp(0);
    for_each_mode(g, [&](std::size_t idx, const Wavevector& xi) {
        const double m2 = norm2(xi);
        const Complex a0 = a[idx], b0 = b[idx];
        if (m2 == 0.0) {
            b[idx] = b0 - 2.0 * h * a0;
            return;
        }
        const double H = gp_H(m2);
        const double c = std::cos(H * h), s = std::sin(H * h);
        const double Uv = gp_U(m2);
        a[idx] = c * a0 + Uv * s * b0;
        b[idx] = -s / Uv * a0 + c * b0;
    });
    u1.to_physical();
    u2.to_physical();
    auto out = u.comp(0);
    auto ra = u1.comp(0);
    auto rb = u2.comp(0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = Complex(ra[i].real(), rb[i].real());
}

inline void gp_nonlinear_substep(SpectralField& u, double h) {
    // RK4 on u' = -i (3u1^2 + u2^2 + |u|^2 u1) + (2 u1 u2 + |u|^2 u2)
    auto rhs = [](Complex z) {
        const double x = z.real(), y = z.imag();
        const double r2 = x * x + y * y;
        const Complex f(3.0 * x * x + y * y + r2 * x, 2.0 * x * y + r2 * y);
        return Complex(0.0, -1.0) * f;
    };
    for (Complex& z : u.raw()) {
        const Complex k1 = rhs(z);
        const Complex k2 = rhs(z + 0.5 * h * k1);
        const Complex k3 = rhs(z + 0.5 * h * k2);
        const Complex k4 = rhs(z + h * k3);
        z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

}  // namespace gpdetail

inline std::vector<SpectralField> gp_extend_forward(const SpectralField& u_at_t0, double t0,
                                                    double t1, double dt,
                                                    const std::vector<double>& sample_times = {},
                                                    double max_phase = std::numbers::pi / 4.0) {
    if (u_at_t0.components() != 1) throw ConfigError("gp_extend_forward: single-component field");
    const Grid& g = u_at_t0.grid();
    const double m2max = g.dim * g.nyquist() * g.nyquist();
    if (dt * gp_H(m2max) > max_phase + 1e-12) {
        std::ostringstream msg;
        msg << "gp_extend_forward: dt=" << dt << " violates dt*H(xi_max) <= " << max_phase
            << " (need dt <= " << max_phase / gp_H(m2max) << ")";
        throw ConfigError(msg.str());
    }
    const double span = t1 - t0;
    const long nsteps = std::lround(std::abs(span) / dt);
    if (nsteps < 1) throw ConfigError("gp_extend_forward: span shorter than dt");
    const double h = span / static_cast<double>(nsteps);

    std::vector<SpectralField> samples;
    std::size_t next_sample = 0;
    auto maybe_sample = [&](const SpectralField& u, double t) {
        while (next_sample < sample_times.size() &&
               std::abs(sample_times[next_sample] - t) <= 1e-9 * std::max(1.0, std::abs(t))) {
            samples.push_back(u);
            ++next_sample;
        }
    };
    SpectralField u = u_at_t0.in_view(View::physical);
    maybe_sample(u, t0);
    for (long s = 0; s < nsteps; ++s) {
        gpdetail::gp_nonlinear_substep(u, 0.5 * h);
        gpdetail::gp_linear_step(u, h);
        gpdetail::gp_nonlinear_substep(u, 0.5 * h);
        if (!u.all_finite()) throw NumericalError("gp_extend_forward: non-finite state");
        maybe_sample(u, t0 + h * static_cast<double>(s + 1));
    }
    if (sample_times.empty()) samples.push_back(u);
    if (next_sample < sample_times.size())
        throw ConfigError("gp_extend_forward: sample times must land on step boundaries");
    return samples;
}

// Largest ||phi||_L3 (factor-2 ladder refined by bisection) at which the
// inversion keeps an observed contraction factor <= 1/2 across a random
// battery; the frozen default kEtaStarDefault comes from this routine.
inline double calibrate_eta_star(const Grid& g, int battery = 16, std::uint64_t seed = 5) {
    auto battery_ok = [&](double level) {
        for (int b = 0; b < battery; ++b) {
            SpectralField phi(g, 1, View::physical);
            auto data = phi.comp(0);
            for (std::size_t i = 0; i < data.size(); ++i)
                data[i] = Complex(standard_normal(mix_key(seed, b, 2u * i)),
                                  standard_normal(mix_key(seed, b, 2u * i + 1)));
            FourierSymbol lowpass{
                [](const Wavevector& xi) { return Complex(std::exp(-0.5 * norm2(xi))); },
                ZeroModePolicy::keep};
            phi = apply_symbol(phi, lowpass);
            phi *= level / lp_norm_x(phi, 3.0);
            try {
                GpInversion inv = invert_g(phi, 2.0 * level);
                if (inv.contraction > 0.5) return false;
            } catch (const PreconditionError&) {
                return false;
            }
        }
        return true;
    };
    double lo = 1.0 / 1024.0;
    if (!battery_ok(lo)) return 0.0;
    while (battery_ok(2.0 * lo) && lo < 64.0) lo *= 2.0;
    double hi = 2.0 * lo;
    for (int i = 0; i < 12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (battery_ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace dscatter
