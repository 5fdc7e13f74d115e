#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dscatter/symbol.hpp"

namespace dscatter {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Spatial norms
// ---------------------------------------------------------------------------

// Riemann-sum L^r norm; vector values are combined pointwise by the Euclidean
// magnitude before the scalar L^r (the component l2 convention). r = inf is
// the max over samples.
inline double lp_norm_x(const SpectralField& field, double r) {
    if (!(r > 0.0)) throw ConfigError("lp_norm_x: exponent must be positive");
    SpectralField f = field.in_view(View::physical);
    const std::size_t npts = f.npoints();
    const int N = f.components();

    if (r == kInf) {
        double m = 0.0;
        for (std::size_t i = 0; i < npts; ++i) {
            double a2 = 0.0;
            for (int c = 0; c < N; ++c) a2 += std::norm(f.comp(c)[i]);
            m = std::max(m, a2);
        }
        return std::sqrt(m);
    }

    double acc = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
        double a2 = 0.0;
        for (int c = 0; c < N; ++c) a2 += std::norm(f.comp(c)[i]);
        acc += std::pow(a2, 0.5 * r);
    }
    return std::pow(acc * f.grid().cell_volume(), 1.0 / r);
}

// || |nabla|^s u ||_2 or || <nabla>^s u ||_2 with the GP convention
// <xi> = sqrt(2+|xi|^2). For homogeneous s<0 the torus zero mode is projected
// out and reported through the optional flag.
inline double sobolev_norm(const SpectralField& field, double s, bool homogeneous,
                           bool* zero_mode_dropped = nullptr) {
    SpectralField f = field.in_view(View::frequency);
    double acc = 0.0;
    bool dropped = false;
    for (int c = 0; c < f.components(); ++c) {
        auto comp = f.comp(c);
        for_each_mode(f.grid(), [&](std::size_t idx, const Wavevector& xi) {
            const double m2 = norm2(xi);
            double w;
            if (homogeneous) {
                if (m2 == 0.0) {
                    if (s < 0.0) {
                        dropped = true;
                        return;
                    }
                    w = (s == 0.0) ? 1.0 : 0.0;
                } else {
                    w = std::pow(m2, 0.5 * s);
                }
            } else {
                w = std::pow(2.0 + m2, 0.5 * s);
            }
            acc += w * w * std::norm(comp[idx]);
        });
    }
    if (zero_mode_dropped) *zero_mode_dropped = dropped;
    const double weight = f.grid().cell_volume() / static_cast<double>(f.grid().npoints());
    return std::sqrt(acc * weight);
}

// H^1 norm in the GP convention, ||<nabla> u||_2
inline double h1_norm(const SpectralField& field) { return sobolev_norm(field, 1.0, false); }

// ---------------------------------------------------------------------------
// Time quadrature on log-spaced grids
// ---------------------------------------------------------------------------

struct TimeGrid {
    double T = 1.0;
    double Tmax = 64.0;
    int n = 128;

    TimeGrid() = default;
    TimeGrid(double T_, double Tmax_, int n_) : T(T_), Tmax(Tmax_), n(n_) {
        if (!(T > 0.0) || !(Tmax > T)) throw ConfigError("time grid: need 0 < T < Tmax");
        if (n < 2) throw ConfigError("time grid: need at least 2 nodes");
    }

    double t(int j) const {
        return T * std::pow(Tmax / T, static_cast<double>(j) / (n - 1));
    }
    std::vector<double> times() const {
        std::vector<double> out(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = t(j);
        return out;
    }
    double du() const { return std::log(Tmax / T) / (n - 1); }
};

enum class QuadRule { trapezoid, simpson };

// integral of y(t) dt over [t.front(), t.back()] for log-uniform samples,
// computed as the integral of y(t) t in u = log t
inline double integrate_log(const std::vector<double>& t, const std::vector<double>& y,
                            QuadRule rule = QuadRule::simpson) {
    const std::size_t n = t.size();
    if (n != y.size() || n < 2) throw ConfigError("integrate_log: bad sample arrays");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = y[i] * t[i];
    const double du = std::log(t[1] / t[0]);

    if (rule == QuadRule::trapezoid || n == 2) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) acc += 0.5 * (g[i] + g[i + 1]);
        return acc * du;
    }
    // composite Simpson; odd trailing interval handled by trapezoid
    double acc = 0.0;
    std::size_t i = 0;
    for (; i + 2 < n; i += 2) acc += (g[i] + 4.0 * g[i + 1] + g[i + 2]) * du / 3.0;
    if (i + 1 < n) acc += 0.5 * (g[i] + g[i + 1]) * du;
    return acc;
}

// ---------------------------------------------------------------------------
// Time-weighted space-time norms X^{q,r}_eps(I_T)
// ---------------------------------------------------------------------------

struct WeightedNormSpec {
    double q = kInf;
    double r = 2.0;
    double eps = 0.0;
    double T = 1.0;
    std::vector<double> time_grid;  // increasing, inside (T, Tmax]
    QuadRule rule = QuadRule::simpson;

    static WeightedNormSpec from_grid(double q, double r, double eps, const TimeGrid& tg,
                                      QuadRule rule = QuadRule::simpson) {
        return {q, r, eps, tg.T, tg.times(), rule};
    }
};

struct WeightedNormResult {
    double value = 0.0;
    double quad_error = 0.0;  // Richardson half-resolution comparison
};

// || t^eps y(t) ||_{L^q_t} from precomputed spatial norms y_j = ||u(t_j)||_r,
// restricted to samples with t >= t_start (default: the whole grid)
inline WeightedNormResult weighted_norm_from_samples(const std::vector<double>& ts,
                                                     const std::vector<double>& ys,
                                                     const WeightedNormSpec& spec,
                                                     double t_start = 0.0) {
    if (ts.empty() || ts.size() != ys.size())
        throw ConfigError("weighted norm: empty or mismatched trajectory");
    std::vector<double> t, w;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < t_start) continue;
        t.push_back(ts[i]);
        w.push_back(std::pow(ts[i], spec.eps) * ys[i]);
    }
    if (t.empty()) throw ConfigError("weighted norm: no samples at or beyond t_start");

    if (spec.q == kInf) {
        double m = 0.0;
        for (double v : w) m = std::max(m, v);
        return {m, 0.0};
    }

    std::vector<double> integrand(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) integrand[i] = std::pow(w[i], spec.q);
    if (t.size() < 2) return {std::pow(integrand[0], 1.0 / spec.q), 0.0};
    const double full = integrate_log(t, integrand, spec.rule);

    double err = 0.0;
    if (t.size() >= 5) {
        std::vector<double> t2, i2;
        for (std::size_t i = 0; i < t.size(); i += 2) {
            t2.push_back(t[i]);
            i2.push_back(integrand[i]);
        }
        if (t2.back() != t.back()) {
            t2.push_back(t.back());
            i2.push_back(integrand.back());
        }
        const double half = integrate_log(t2, i2, spec.rule);
        err = std::abs(std::pow(std::max(full, 0.0), 1.0 / spec.q) -
                       std::pow(std::max(half, 0.0), 1.0 / spec.q));
    }
    return {std::pow(std::max(full, 0.0), 1.0 / spec.q), err};
}

inline WeightedNormResult weighted_spacetime_norm(const std::vector<double>& ts,
                                                  const std::vector<SpectralField>& fields,
                                                  const WeightedNormSpec& spec,
                                                  double t_start = 0.0) {
    if (ts.size() != fields.size() || ts.empty())
        throw ConfigError("weighted norm: empty or mismatched trajectory");
    std::vector<double> ys(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) ys[i] = lp_norm_x(fields[i], spec.r);
    return weighted_norm_from_samples(ts, ys, spec, t_start);
}

// ---------------------------------------------------------------------------
// Admissibility and the epsilon window
// ---------------------------------------------------------------------------

struct AdmissibilityReport {
    bool admissible = false;
    bool uniqueness_ok = false;  // only meaningful when p was supplied
    double defect = 0.0;         // |1/q + d/(2r) - d/4|
    std::string note;
};

inline AdmissibilityReport check_admissible(int d, double q, double r,
                                            std::optional<double> p = std::nullopt) {
    AdmissibilityReport rep;
    const double invq = (q == kInf) ? 0.0 : 1.0 / q;
    const double invr = (r == kInf) ? 0.0 : 1.0 / r;
    rep.defect = std::abs(invq + 0.5 * d * invr - 0.25 * d);

    const bool in_range = q >= 2.0 && r >= 2.0;
    const bool excluded = (d == 2 && q == 2.0 && r == kInf);
    rep.admissible = in_range && !excluded && rep.defect <= 1e-9;
    if (excluded) rep.note = "(d,q,r)=(2,2,inf) endpoint excluded";
    else if (!in_range) rep.note = "q,r must lie in [2,inf]";
    else if (rep.defect > 1e-9) rep.note = "scaling relation 1/q + d/2r = d/4 violated";

    if (p) {
        const double ratio = r / (*p + 1.0);
        const double lo = std::max(1.0, 2.0 * d / (d + 2.0));
        rep.uniqueness_ok = ratio >= lo - 1e-12 && ratio <= 2.0 + 1e-12 &&
                            !(d == 2 && std::abs(ratio - 1.0) <= 1e-12);
        if (!rep.uniqueness_ok && rep.note.empty()) rep.note = "uniqueness range on r/(p+1) violated";
    }
    return rep;
}

inline double strauss_p0(int d) {
    return (2.0 - d + std::sqrt(static_cast<double>(d) * d + 12.0 * d + 4.0)) / (2.0 * d);
}
inline double threshold_p1(int d) {
    return (4.0 - d + std::sqrt(static_cast<double>(d) * d + 24.0 * d + 16.0)) / (4.0 * d);
}

struct ExponentWindow {
    int d = 0;
    double p = 0.0;
    double lower = 0.0;   // 1/p - d/4
    double upper = 0.0;   // d p / (4(p+1)) = 1/q0
    double p0 = 0.0;
    double p1 = 0.0;
    double r0 = 0.0;      // maximizing pair: r0 = 2(p+1)
    double q0 = 0.0;
    double eps_default = 0.0;
    bool nonempty = false;

    bool contains(double eps) const { return nonempty && eps > lower && eps < upper && eps > 0.0; }
};

inline ExponentWindow exponent_window(int d, double p) {
    if (d < 1) throw ConfigError("exponent_window: d must be >= 1");
    if (!(p > 0.0)) throw ConfigError("exponent_window: p must be positive");
    ExponentWindow w;
    w.d = d;
    w.p = p;
    w.lower = 1.0 / p - 0.25 * d;
    w.upper = d * p / (4.0 * (p + 1.0));
    w.p0 = strauss_p0(d);
    w.p1 = threshold_p1(d);
    w.r0 = 2.0 * (p + 1.0);
    w.q0 = 1.0 / w.upper;
    w.nonempty = w.lower < w.upper;
    const double lo = std::max(w.lower, 0.0);
    w.eps_default = w.nonempty ? 0.5 * (lo + w.upper) : 0.0;
    return w;
}

// ---------------------------------------------------------------------------
// GP energy, two algebraic routes
// ---------------------------------------------------------------------------

struct GpEnergy {
    double route_a = 0.0;         // |grad u|^2/2 + (|u|^2 + 2 u1)^2 / 4
    double route_b = 0.0;         // |grad zeta|^2/2 + |U |u|^2|^2 / 4 + torus zero-mode term
    double zero_mode_term = 0.0;  // V * mean(u1 + (2-Delta)^{-1}|u|^2)^2, included in route_b
    bool zero_mode_flagged = true;
};

inline GpEnergy gp_energy(const SpectralField& u) {
    if (u.components() != 1) throw ConfigError("gp_energy: field must be single-component");
    const Grid& g = u.grid();
    SpectralField up = u.in_view(View::physical);
    const std::size_t npts = g.npoints();
    const double cv = g.cell_volume();

    SpectralField u1(g, 1, View::physical), u2(g, 1, View::physical), rho(g, 1, View::physical);
    for (std::size_t i = 0; i < npts; ++i) {
        const Complex z = up.comp(0)[i];
        u1.comp(0)[i] = z.real();
        u2.comp(0)[i] = z.imag();
        rho.comp(0)[i] = std::norm(z);
    }

    GpEnergy e;

    // route A
    double grad2 = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
        const double gn = spectral_gradient(up, axis).l2_norm();
        grad2 += gn * gn;
    }
    double pot = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
        const double v = rho.comp(0)[i].real() + 2.0 * u1.comp(0)[i].real();
        pot += v * v;
    }
    e.route_a = 0.5 * grad2 + 0.25 * pot * cv;

    // route B through regularized combined symbols: zeta = U^{-1} M(u),
    // grad zeta = [grad U^{-1}](u1 + (2-Delta)^{-1}|u|^2) + i grad u2
    const CombinedSymbol inv_two_minus_delta = combined_symbol({{GpOp::InvTwoMinusDelta, 1.0}});
    const CombinedSymbol grad_uinv = combined_symbol({{GpOp::Uinv, 1.0}});  // radial part; i xi_j applied per axis
    SpectralField w = u1;
    w += apply_combined(rho, inv_two_minus_delta);

    double gradzeta2 = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
        SpectralField a = gradient_with_radial(w, axis, grad_uinv);
        SpectralField b = spectral_gradient(u2, axis);
        a.axpy(Complex(0.0, 1.0), b);
        const double gn = a.l2_norm();
        gradzeta2 += gn * gn;
    }
    const CombinedSymbol u_sym = combined_symbol({{GpOp::U, 1.0}});
    const double urho = apply_combined(rho, u_sym).l2_norm();

    double wbar = 0.0;
    for (std::size_t i = 0; i < npts; ++i) wbar += w.comp(0)[i].real();
    wbar /= static_cast<double>(npts);
    e.zero_mode_term = g.volume() * wbar * wbar;

    e.route_b = 0.5 * gradzeta2 + 0.25 * urho * urho + e.zero_mode_term;
    e.zero_mode_flagged = true;
    return e;
}

}  // namespace dscatter
