#pragma once

#include <chrono>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dscatter/duhamel.hpp"
#include "dscatter/fit.hpp"
#include "dscatter/system.hpp"

namespace dscatter {

struct SolverConfig {
    double T = 1.0;          // start of the far-field interval, >= 1
    double Tmax = 64.0;      // truncation of the infinite Duhamel horizon
    int n_time = 128;        // log-spaced nodes on [T, Tmax]
    double tol = 1e-6;       // fixed-point tolerance in the solver norm
    int max_iter = 30;
    double eta_target = 0.25;  // smallness threshold for || t^eps U(t) u+ || on I_T
    double epsilon = -1.0;     // < 0: midpoint of the admissible window
    double q1 = -1.0, r1 = -1.0;  // < 0: the maximizing pair
    bool scan_T = true;        // double T until the smallness precondition holds
    double scan_cap = 1024.0;
    double tmax_factor = 16.0;  // keep Tmax >= tmax_factor * T during the scan

    void validate() const {
        if (!(T >= 1.0)) throw ConfigError("solver: T must be >= 1");
        if (!(Tmax > T)) throw ConfigError("solver: Tmax must exceed T");
        if (!(tol > 0.0)) throw ConfigError("solver: tol must be positive");
        if (n_time < 8) throw ConfigError("solver: need at least 8 time nodes");
    }
};

struct IterationReport {
    // resolved configuration
    double T = 0.0, Tmax = 0.0;
    int n_time = 0;
    double epsilon = 0.0, q0 = 0.0, r0 = 0.0, q1 = 0.0, r1 = 0.0;
    double eta_target = 0.0, tol = 0.0;

    double eta_free = 0.0;  // smallness norm of the free part on I_T
    std::vector<double> update_norms;
    std::vector<double> contraction_ratios;
    bool converged = false;
    int iterations = 0;
    double final_update = 0.0;
    double residual_self = 0.0;     // ||Phi(v*) - v*|| at the solver quadrature
    double residual_doubled = 0.0;  // same, re-evaluated at doubled time nodes
    double duhamel_quad_error = 0.0;
    double tail_estimate = 0.0;     // Duhamel tail beyond Tmax (L2-rate bound)
    double tail_rate = 0.0;
    double wraparound_time = 0.0;
    double wall_seconds = 0.0;
    std::string flags;    // non-fatal diagnostics
    std::string failure;  // empty iff converged
};

struct SolveOutcome {
    bool ok = false;
    Trajectory solution;    // u = U(t) u+ + v on the grid
    Trajectory correction;  // v
    IterationReport report;
};

namespace detail {

struct SolverNorm {
    double eps;
    double q1, r1;
    // intersection norm: max of X^{inf,2}_eps and X^{q1,r1}_eps
    double operator()(const std::vector<double>& ts, const std::vector<SpectralField>& fs) const {
        WeightedNormSpec a{kInf, 2.0, eps, ts.front(), ts, QuadRule::simpson};
        WeightedNormSpec b{q1, r1, eps, ts.front(), ts, QuadRule::simpson};
        return std::max(weighted_spacetime_norm(ts, fs, a).value,
                        weighted_spacetime_norm(ts, fs, b).value);
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

// fraction-of-spectral-mass radius: smallest nu with
// sum_{|xi|<=nu} |phi_hat|^2 >= (1-tail) * total
inline double spectral_radius(const SpectralField& phi, double tail = 1e-6) {
    SpectralField f = phi.in_view(View::frequency);
    std::vector<std::pair<double, double>> modes;  // (|xi|, mass)
    double total = 0.0;
    for (int c = 0; c < f.components(); ++c) {
        auto comp = f.comp(c);
        for_each_mode(f.grid(), [&](std::size_t idx, const Wavevector& xi) {
            const double mass = std::norm(comp[idx]);
            modes.emplace_back(norm(xi), mass);
            total += mass;
        });
    }
    std::sort(modes.begin(), modes.end());
    double acc = 0.0;
    for (const auto& [r, mass] : modes) {
        acc += mass;
        if (acc >= (1.0 - tail) * total) return r;
    }
    return modes.empty() ? 0.0 : modes.back().first;
}

inline double wraparound_estimate(const SpectralField& u_plus, const std::vector<double>& masses) {
    double mmax = 0.0;
    for (double m : masses) mmax = std::max(mmax, std::abs(m));
    const double v = 2.0 * mmax * spectral_radius(u_plus);
    return v > 0 ? 0.25 * u_plus.grid().box_length / v : kInf;
}

// v interpolated onto the doubled grid (midpoints in log t)
inline Trajectory interp_doubled(const Trajectory& v) {
    TimeGrid fine(v.grid.T, v.grid.Tmax, 2 * v.grid.n - 1);
    Trajectory out(fine);
    out.fields.reserve(out.times.size());
    for (std::size_t j = 0; j + 1 < v.size(); ++j) {
        out.fields.push_back(v.fields[j]);
        SpectralField mid = v.fields[j];
        mid *= 0.5;
        mid.axpy(0.5, v.fields[j + 1]);
        out.fields.push_back(std::move(mid));
    }
    out.fields.push_back(v.fields.back());
    return out;
}

}  // namespace detail

// one application of Phi(v) = i int_t^{Tmax} U(t-s) f(u0 + v) ds
inline DuhamelResult apply_phi(const SystemSpec& spec, const Trajectory& u0, const Trajectory& v) {
    Trajectory F(u0.grid);
    F.fields.reserve(u0.size());
    for (std::size_t j = 0; j < u0.size(); ++j) {
        SpectralField w = u0.fields[j];
        if (!v.fields.empty()) w += v.fields[j];
        F.fields.push_back(eval_f(spec, w));
    }
    return duhamel_backward(F, nls_dispersion(spec.masses));
}

// Backward Picard construction of the scattering solution from the final
// datum u_plus. Returns diagnostics in all cases; `ok` is false when the
// contraction failed (the throwing wrapper maps failures to the error
// taxonomy).
inline SolveOutcome picard_solve_outcome(const SystemSpec& spec, const SpectralField& u_plus,
                                         const SolverConfig& cfg,
                                         const Trajectory* v_init = nullptr) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();
    const int d = u_plus.grid().dim;

    SolveOutcome out;
    IterationReport& rep = out.report;

    const ExponentWindow win = exponent_window(d, spec.p);
    if (!win.nonempty)
        throw ConfigError("solver: empty epsilon window (p <= p1(d)); no admissible weight exists");
    const double eps = cfg.epsilon < 0.0 ? win.eps_default : cfg.epsilon;
    if (!win.contains(eps)) {
        std::ostringstream msg;
        msg << "solver: epsilon=" << eps << " outside the admissible window (" << win.lower << ", "
            << win.upper << ")";
        throw ConfigError(msg.str());
    }
    const double q0 = win.q0, r0 = win.r0;
    const double q1 = cfg.q1 > 0 ? cfg.q1 : q0;
    const double r1 = cfg.r1 > 0 ? cfg.r1 : r0;
    {
        auto adm = check_admissible(d, q1, r1, spec.p);
        if (!adm.admissible || !adm.uniqueness_ok)
            rep.flags += "[q1r1 outside the admissible/uniqueness range: untested territory]";
    }

    rep.epsilon = eps;
    rep.q0 = q0;
    rep.r0 = r0;
    rep.q1 = q1;
    rep.r1 = r1;
    rep.eta_target = cfg.eta_target;
    rep.tol = cfg.tol;
    rep.n_time = cfg.n_time;
    rep.wraparound_time = detail::wraparound_estimate(u_plus, spec.masses);

    const Dispersion omega = nls_dispersion(spec.masses);

    // smallness scan: pre-screen T on a master grid, then confirm exactly
    double T = cfg.T;
    double Tmax = std::max(cfg.Tmax, cfg.tmax_factor * T);
    double eta = kInf;
    {
        TimeGrid master(cfg.T, std::max(cfg.Tmax, cfg.tmax_factor * cfg.scan_cap), 2 * cfg.n_time);
        Trajectory free_master = free_trajectory(u_plus, omega, master);
        std::vector<double> ys(free_master.size());
        for (std::size_t j = 0; j < free_master.size(); ++j)
            ys[j] = lp_norm_x(free_master.fields[j], r0);
        while (true) {
            WeightedNormSpec spec0{q0, r0, eps, T, master.times(), QuadRule::simpson};
            const double Tm = std::max(cfg.Tmax, cfg.tmax_factor * T);
            // restrict to [T, Tm]
            std::vector<double> ts_w, ys_w;
            for (std::size_t j = 0; j < ys.size(); ++j)
                if (free_master.times[j] >= T && free_master.times[j] <= Tm) {
                    ts_w.push_back(free_master.times[j]);
                    ys_w.push_back(ys[j]);
                }
            eta = weighted_norm_from_samples(ts_w, ys_w, spec0).value;
            if (eta <= cfg.eta_target || !cfg.scan_T) break;
            if (2.0 * T > cfg.scan_cap) {
                std::ostringstream msg;
                msg << "solver: smallness precondition unsatisfiable up to T=" << cfg.scan_cap
                    << " (eta=" << eta << " > target " << cfg.eta_target
                    << "); increase T cap, enlarge Tmax, or shrink the datum";
                rep.failure = msg.str();
                rep.eta_free = eta;
                rep.T = T;
                return out;
            }
            T *= 2.0;
        }
        Tmax = std::max(cfg.Tmax, cfg.tmax_factor * T);
    }

    TimeGrid tg(T, Tmax, cfg.n_time);
    rep.T = T;
    rep.Tmax = Tmax;
    Trajectory u0 = free_trajectory(u_plus, omega, tg);
    {
        WeightedNormSpec spec0 = WeightedNormSpec::from_grid(q0, r0, eps, tg);
        rep.eta_free = weighted_spacetime_norm(tg.times(), u0.fields, spec0).value;
        if (cfg.scan_T && rep.eta_free > cfg.eta_target * 1.05) {
            std::ostringstream msg;
            msg << "solver: smallness precondition failed at T=" << T << " (eta=" << rep.eta_free
                << "); increase T";
            rep.failure = msg.str();
            return out;
        }
    }

    const detail::SolverNorm xnorm{eps, q1, r1};

    // Picard iteration from v = 0 (or a caller-supplied admissible start)
    Trajectory v(tg);
    if (v_init) {
        if (v_init->size() != v.times.size())
            throw ConfigError("solver: initial correction trajectory does not match the time grid");
        v.fields = v_init->fields;
    } else {
        v.fields.assign(tg.times().size(), SpectralField(u_plus.grid(), spec.ncomp, View::physical));
    }
    double prev_update = -1.0;
    int bad_streak = 0;
    bool converged = false;
    DuhamelResult last;

    for (int it = 0; it < cfg.max_iter; ++it) {
        last = apply_phi(spec, u0, v);
        const double upd = xnorm.diff(v.times, last.traj.fields, v.fields);
        rep.update_norms.push_back(upd);
        rep.duhamel_quad_error = last.quad_error;
        if (prev_update > 0.0) {
            const double ratio = upd / prev_update;
            rep.contraction_ratios.push_back(ratio);
            bad_streak = ratio >= 1.0 ? bad_streak + 1 : 0;
            if (bad_streak >= 3) {
                rep.failure = "solver: contraction ratio >= 1 for 3 consecutive iterations";
                rep.iterations = it + 1;
                return out;
            }
        }
        v.fields = std::move(last.traj.fields);
        rep.iterations = it + 1;
        prev_update = upd;
        if (upd <= cfg.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "solver: no convergence within max_iter=" << cfg.max_iter
            << " (last update " << prev_update << ")";
        rep.failure = msg.str();
        return out;
    }
    rep.final_update = prev_update;

    // residuals: same-resolution and the independent doubled-quadrature oracle
    {
        DuhamelResult phi_same = apply_phi(spec, u0, v);
        rep.residual_self = xnorm.diff(v.times, phi_same.traj.fields, v.fields);

        Trajectory v_fine = detail::interp_doubled(v);
        Trajectory u0_fine = free_trajectory(u_plus, omega, v_fine.grid);
        DuhamelResult phi_fine = apply_phi(spec, u0_fine, v_fine);
        std::vector<SpectralField> coarse;
        coarse.reserve(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) coarse.push_back(phi_fine.traj.fields[2 * j]);
        rep.residual_doubled = xnorm.diff(v.times, coarse, v.fields);
    }

    // truncation tail beyond Tmax from the fitted decay of ||u||_{r0};
    // ||f(u)||_2 <= C ||u||_{2(p+1)}^{p+1} drives the Duhamel remainder
    {
        std::vector<double> ys(v.size());
        std::vector<SpectralField> usol(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) {
            SpectralField w = u0.fields[j];
            w += v.fields[j];
            ys[j] = lp_norm_x(w, 2.0 * (spec.p + 1.0));
            usol[j] = std::move(w);
        }
        try {
            FitResult fit = fit_power_law(v.times, ys);
            rep.tail_rate = -fit.exponent;
            const double decay = rep.tail_rate * (spec.p + 1.0);
            rep.tail_estimate = decay > 1.0
                                    ? std::pow(fit.amplitude, spec.p + 1.0) *
                                          std::pow(Tmax, 1.0 - decay) / (decay - 1.0)
                                    : kInf;
            if (!(decay > 1.0)) rep.flags += "[tail bound divergent: fitted decay too slow]";
        } catch (const ConfigError&) {
            rep.flags += "[tail fit unavailable]";
        }
        out.solution = Trajectory(tg);
        out.solution.fields = std::move(usol);
    }

    out.correction = std::move(v);
    rep.converged = true;
    out.ok = true;
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

inline std::pair<Trajectory, IterationReport> picard_solve(const SystemSpec& spec,
                                                           const SpectralField& u_plus,
                                                           const SolverConfig& cfg) {
    SolveOutcome out = picard_solve_outcome(spec, u_plus, cfg);
    if (!out.ok) {
        if (out.report.failure.find("precondition") != std::string::npos)
            throw PreconditionError(out.report.failure);
        throw DivergenceError(out.report.failure);
    }
    return {std::move(out.solution), std::move(out.report)};
}

// Uniqueness probe: restart the contraction from a random small admissible
// correction and return the solver-norm gap between the two fixed points.
inline double uniqueness_probe(const SystemSpec& spec, const SpectralField& u_plus,
                               const SolveOutcome& ref, std::uint64_t seed = 11) {
    if (!ref.ok) throw ConfigError("uniqueness_probe: reference run did not converge");
    const IterationReport& r = ref.report;

    Trajectory start(TimeGrid(r.T, r.Tmax, r.n_time));
    start.fields.reserve(start.times.size());
    FourierSymbol lowpass{[](const Wavevector& xi) { return Complex(std::exp(-0.5 * norm2(xi))); },
                          ZeroModePolicy::keep};
    for (std::size_t j = 0; j < start.times.size(); ++j) {
        SpectralField f(u_plus.grid(), spec.ncomp, View::physical);
        for (int c = 0; c < spec.ncomp; ++c) {
            auto data = f.comp(c);
            for (std::size_t i = 0; i < data.size(); ++i)
                data[i] = Complex(standard_normal(mix_key(seed, j, 2u * i, c)),
                                  standard_normal(mix_key(seed, j, 2u * i + 1, c)));
        }
        start.fields.push_back(apply_symbol(f, lowpass));
    }
    const detail::SolverNorm xnorm{r.epsilon, r.q1, r.r1};
    const double raw = xnorm(start.times, start.fields);
    const double target = 0.5 * r.eta_target;
    for (SpectralField& f : start.fields) f *= target / raw;

    SolverConfig cfg2;
    cfg2.T = r.T;
    cfg2.Tmax = r.Tmax;
    cfg2.n_time = r.n_time;
    cfg2.tol = r.tol;
    cfg2.eta_target = r.eta_target;
    cfg2.epsilon = r.epsilon;
    cfg2.q1 = r.q1;
    cfg2.r1 = r.r1;
    cfg2.scan_T = false;
    SolveOutcome alt = picard_solve_outcome(spec, u_plus, cfg2, &start);
    if (!alt.ok) throw DivergenceError("uniqueness_probe: alternative start diverged: " + alt.report.failure);
    return xnorm.diff(ref.correction.times, alt.correction.fields, ref.correction.fields);
}

// ---------------------------------------------------------------------------
// Forward split-step extension (Strang)
// ---------------------------------------------------------------------------

namespace detail {

inline void nonlinear_substep(const SystemSpec& spec, SpectralField& u, double h) {
    const std::size_t npts = u.npoints();
    if (spec.gauge_diagonal) {
        // i u_t = c |u|^p u preserves |u| pointwise: exact phase rotation
        const double c = spec.scalar_coupling;
        for (int comp = 0; comp < u.components(); ++comp) {
            auto data = u.comp(comp);
            for (std::size_t i = 0; i < npts; ++i)
                data[i] *= std::polar(1.0, -c * std::pow(std::abs(data[i]), spec.p) * h);
        }
        return;
    }
    // classical RK4 on u' = -i f(u), pointwise
    const int N = u.components();
    std::vector<Complex> y(static_cast<std::size_t>(N)), k1(y), k2(y), k3(y), k4(y), tmp(y);
    const Complex mi(0.0, -1.0);
    for (std::size_t i = 0; i < npts; ++i) {
        for (int c = 0; c < N; ++c) y[static_cast<std::size_t>(c)] = u.comp(c)[i];
        spec.f(y, k1);
        for (int c = 0; c < N; ++c) tmp[static_cast<std::size_t>(c)] = y[static_cast<std::size_t>(c)] + 0.5 * h * mi * k1[static_cast<std::size_t>(c)];
        spec.f(tmp, k2);
        for (int c = 0; c < N; ++c) tmp[static_cast<std::size_t>(c)] = y[static_cast<std::size_t>(c)] + 0.5 * h * mi * k2[static_cast<std::size_t>(c)];
        spec.f(tmp, k3);
        for (int c = 0; c < N; ++c) tmp[static_cast<std::size_t>(c)] = y[static_cast<std::size_t>(c)] + h * mi * k3[static_cast<std::size_t>(c)];
        spec.f(tmp, k4);
        for (int c = 0; c < N; ++c)
            u.comp(c)[i] = y[static_cast<std::size_t>(c)] +
                           (h / 6.0) * mi *
                               (k1[static_cast<std::size_t>(c)] + 2.0 * k2[static_cast<std::size_t>(c)] +
                                2.0 * k3[static_cast<std::size_t>(c)] + k4[static_cast<std::size_t>(c)]);
    }
}

}  // namespace detail

// Strang split-step integration of i u_t + M Delta u = f(u) from t0 to t1
// (either direction), sampling at the requested times (each must land on a
// step boundary). The default step bound keeps the fastest linear phase
// advance per step below pi/4.
inline std::vector<SpectralField> extend_forward(const SystemSpec& spec, const SpectralField& u_at_t0,
                                                 double t0, double t1, double dt,
                                                 const std::vector<double>& sample_times = {},
                                                 double max_phase = std::numbers::pi / 4.0) {
    if (t1 == t0) return {u_at_t0};
    const double span = t1 - t0;
    if (dt <= 0.0) throw ConfigError("extend_forward: dt must be positive");
    const Grid& g = u_at_t0.grid();
    double mmax = 0.0;
    for (double m : spec.masses) mmax = std::max(mmax, std::abs(m));
    const double xi2 = g.dim * g.nyquist() * g.nyquist();
    if (dt * mmax * xi2 > max_phase + 1e-12) {
        std::ostringstream msg;
        msg << "extend_forward: dt=" << dt << " violates the step bound dt*|M|*|xi_max|^2 <= "
            << max_phase << " (need dt <= " << max_phase / (mmax * xi2) << ")";
        throw ConfigError(msg.str());
    }
    const long nsteps = std::lround(std::abs(span) / dt);
    if (nsteps < 1) throw ConfigError("extend_forward: span shorter than dt");
    const double h = span / static_cast<double>(nsteps);  // signed

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
        detail::nonlinear_substep(spec, u, 0.5 * h);
        u = free_propagate(u, spec.masses, h);
        detail::nonlinear_substep(spec, u, 0.5 * h);
        if (!u.all_finite()) throw NumericalError("extend_forward: non-finite state");
        maybe_sample(u, t0 + h * static_cast<double>(s + 1));
    }
    if (sample_times.empty()) samples.push_back(u);
    if (next_sample < sample_times.size())
        throw ConfigError("extend_forward: sample times must land on step boundaries");
    return samples;
}

// ---------------------------------------------------------------------------
// Scattering verification (independent of the solver internals)
// ---------------------------------------------------------------------------

struct ScatteringReport {
    std::vector<double> times;
    std::vector<double> l2_diff;  // || U(-t) u(t) - u+ ||_2
    bool monotone_ok = false;     // non-increasing up to 10% wiggle
    int monotone_violations = 0;
    double decrease_factor = 0.0;  // l2_diff(T) / l2_diff(t*) with t* ~ Tmax/2
    FitResult decay_fit;           // fitted exponent of the L2 difference
    bool fit_valid = false;
    double xnorm_value = 0.0;      // X^{q,r}_eps norm of the difference
    double xnorm_half = 0.0;       // same over [T, Tmax/2]: horizon-convergence probe
};

inline ScatteringReport verify_scattering(const SystemSpec& spec, const Trajectory& solution,
                                          const SpectralField& u_plus,
                                          const WeightedNormSpec& window) {
    ScatteringReport rep;
    rep.times = solution.times;
    SpectralField uplus_hat = u_plus.in_view(View::frequency);

    std::vector<SpectralField> diffs;
    diffs.reserve(solution.size());
    for (std::size_t j = 0; j < solution.size(); ++j) {
        SpectralField back = free_propagate(solution.fields[j], spec.masses, -solution.times[j]);
        back.to_frequency();
        back -= uplus_hat;
        rep.l2_diff.push_back(back.l2_norm());
        back.to_physical();
        diffs.push_back(std::move(back));
    }

    rep.monotone_violations = 0;
    for (std::size_t j = 0; j + 1 < rep.l2_diff.size(); ++j)
        if (rep.l2_diff[j + 1] > 1.10 * rep.l2_diff[j] && rep.l2_diff[j] > 0.0)
            ++rep.monotone_violations;
    rep.monotone_ok = rep.monotone_violations == 0;

    const double Thalf = 0.5 * solution.grid.Tmax;
    std::size_t jhalf = 0;
    for (std::size_t j = 0; j < rep.times.size(); ++j)
        if (rep.times[j] <= Thalf) jhalf = j;
    rep.decrease_factor = rep.l2_diff[jhalf] > 0.0 ? rep.l2_diff.front() / rep.l2_diff[jhalf] : kInf;

    try {
        rep.decay_fit = fit_power_law(rep.times, rep.l2_diff, solution.grid.T, Thalf);
        rep.fit_valid = true;
    } catch (const ConfigError&) {
        rep.fit_valid = false;
    }

    rep.xnorm_value = weighted_spacetime_norm(rep.times, diffs, window).value;
    {
        std::vector<double> th;
        std::vector<SpectralField> dh;
        for (std::size_t j = 0; j < rep.times.size(); ++j)
            if (rep.times[j] <= Thalf) {
                th.push_back(rep.times[j]);
                dh.push_back(diffs[j]);
            }
        if (th.size() >= 2) rep.xnorm_half = weighted_norm_from_samples(
                th, [&] {
                    std::vector<double> ys(th.size());
                    for (std::size_t j = 0; j < th.size(); ++j) ys[j] = lp_norm_x(dh[j], window.r);
                    return ys;
                }(), window).value;
    }
    return rep;
}

}  // namespace dscatter
