#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dscatter/field.hpp"
#include "dscatter/rng.hpp"

namespace dscatter {

namespace linalg {

// dense Hermitian helpers for the small conservation matrix Lambda

inline double hermiticity_defect(const std::vector<Complex>& a, int n) {
    double d = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            d = std::max(d, std::abs(a[static_cast<std::size_t>(i) * n + j] -
                                     std::conj(a[static_cast<std::size_t>(j) * n + i])));
            scale = std::max(scale, std::abs(a[static_cast<std::size_t>(i) * n + j]));
        }
    return scale > 0 ? d / scale : d;
}

// eigenvalues of a Hermitian matrix by cyclic complex Jacobi sweeps
inline std::vector<double> hermitian_eigenvalues(std::vector<Complex> a, int n) {
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(a[static_cast<std::size_t>(p) * n + q]);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = a[static_cast<std::size_t>(p) * n + q];
                if (std::abs(apq) < 1e-300) continue;
                const double app = a[static_cast<std::size_t>(p) * n + p].real();
                const double aqq = a[static_cast<std::size_t>(q) * n + q].real();
                const double phi = std::arg(apq);
                const double b = std::abs(apq);
                const double theta = 0.5 * std::atan2(2.0 * b, app - aqq);
                const double c = std::cos(theta), s = std::sin(theta);
                const Complex ei(std::cos(phi), std::sin(phi));
                // columns
                for (int k = 0; k < n; ++k) {
                    const Complex akp = a[static_cast<std::size_t>(k) * n + p];
                    const Complex akq = a[static_cast<std::size_t>(k) * n + q];
                    a[static_cast<std::size_t>(k) * n + p] = c * akp + s * std::conj(ei) * akq;
                    a[static_cast<std::size_t>(k) * n + q] = -s * ei * akp + c * akq;
                }
                // rows
                for (int k = 0; k < n; ++k) {
                    const Complex apk = a[static_cast<std::size_t>(p) * n + k];
                    const Complex aqk = a[static_cast<std::size_t>(q) * n + k];
                    a[static_cast<std::size_t>(p) * n + k] = c * apk + s * ei * aqk;
                    a[static_cast<std::size_t>(q) * n + k] = -s * std::conj(ei) * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i) * n + i].real();
    return ev;
}

}  // namespace linalg

// pointwise nonlinearity: reads N input values, writes N output values
using PointNonlinearity = std::function<void(std::span<const Complex>, std::span<Complex>)>;

// NLS system data: i u_t + M Delta u = f(u), with the conservation matrix
// Lambda (Hermitian, positive definite, commuting with M) and the growth
// exponent p of f.
struct SystemSpec {
    std::string name = "custom";
    int ncomp = 1;
    std::vector<double> masses;     // diagonal of M
    double p = 1.0;
    std::vector<Complex> lambda;    // N x N row-major
    PointNonlinearity f;
    bool gauge_diagonal = false;    // f_n = c_n |u_n|^{p} u_n form: exact phase rotation applies
    double scalar_coupling = 0.0;   // coupling for the gauge-diagonal rotation

    Complex lambda_at(int i, int j) const {
        return lambda[static_cast<std::size_t>(i) * ncomp + j];
    }
};

struct GrowthReport {
    std::array<double, 3> scales{1e-3, 1.0, 1e3};
    std::array<double, 3> constants{0.0, 0.0, 0.0};  // max observed ratio per scale
    bool flagged = false;                            // unbounded growth across scales
};

struct GaugeReport {
    double worst_normalized = 0.0;  // max |Im(u* Lambda f)| / (|u|^{p+2} |Lambda|)
    bool pass = false;
};

namespace detail {
inline void eval_point(const SystemSpec& spec, std::span<const Complex> u, std::span<Complex> out) {
    spec.f(u, out);
}
}  // namespace detail

// vectorized f over all grid points (physical view)
inline SpectralField eval_f(const SystemSpec& spec, const SpectralField& u) {
    if (u.components() != spec.ncomp) throw ConfigError("eval_f: component count mismatch");
    SpectralField phys = u.in_view(View::physical);
    SpectralField out(phys.grid(), spec.ncomp, View::physical);
    const std::size_t npts = phys.npoints();
    std::vector<Complex> uin(static_cast<std::size_t>(spec.ncomp)), fout(static_cast<std::size_t>(spec.ncomp));
    for (std::size_t i = 0; i < npts; ++i) {
        for (int c = 0; c < spec.ncomp; ++c) uin[static_cast<std::size_t>(c)] = phys.comp(c)[i];
        detail::eval_point(spec, uin, fout);
        for (int c = 0; c < spec.ncomp; ++c) {
            const Complex v = fout[static_cast<std::size_t>(c)];
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                std::ostringstream msg;
                msg << "eval_f: non-finite output at point index " << i << ", component " << c;
                throw NumericalError(msg.str());
            }
            out.comp(c)[i] = v;
        }
    }
    return out;
}

namespace detail {
inline std::vector<Complex> random_cn(int n, std::uint64_t key, double scale) {
    std::vector<Complex> u(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c)
        u[static_cast<std::size_t>(c)] =
            scale * Complex(standard_normal(mix_key(key, 2u * c)), standard_normal(mix_key(key, 2u * c + 1)));
    return u;
}
inline double abs_cn(const std::vector<Complex>& u) {
    double s = 0;
    for (const Complex& z : u) s += std::norm(z);
    return std::sqrt(s);
}
}  // namespace detail

// Monte Carlo probe of the power-type growth bound
// |f(u)-f(v)| <= C max(|u|,|v|)^p |u-v| at three scales; a constant that
// grows across scales flags the system as invalid.
inline GrowthReport check_growth_bound(const SystemSpec& spec, int sample_count,
                                       std::uint64_t seed = 7) {
    GrowthReport rep;
    for (std::size_t sc = 0; sc < rep.scales.size(); ++sc) {
        const double scale = rep.scales[sc];
        double worst = 0.0;
        bool bad = false;
        std::vector<Complex> fu(static_cast<std::size_t>(spec.ncomp)), fv(static_cast<std::size_t>(spec.ncomp));
        for (int s = 0; s < sample_count; ++s) {
            auto u = detail::random_cn(spec.ncomp, mix_key(seed, sc, 2u * s), scale);
            auto v = detail::random_cn(spec.ncomp, mix_key(seed, sc, 2u * s + 1), scale);
            detail::eval_point(spec, u, fu);
            detail::eval_point(spec, v, fv);
            double dnum = 0, dden = 0;
            for (int c = 0; c < spec.ncomp; ++c) {
                dnum += std::norm(fu[static_cast<std::size_t>(c)] - fv[static_cast<std::size_t>(c)]);
                dden += std::norm(u[static_cast<std::size_t>(c)] - v[static_cast<std::size_t>(c)]);
            }
            const double mx = std::max(detail::abs_cn(u), detail::abs_cn(v));
            if (dden == 0.0 || mx == 0.0) continue;
            const double ratio = std::sqrt(dnum) / (std::pow(mx, spec.p) * std::sqrt(dden));
            if (!std::isfinite(ratio)) {
                bad = true;
                break;
            }
            worst = std::max(worst, ratio);
        }
        rep.constants[sc] = worst;
        if (bad || !std::isfinite(worst)) rep.flagged = true;
    }
    const double lo = *std::min_element(rep.constants.begin(), rep.constants.end());
    const double hi = *std::max_element(rep.constants.begin(), rep.constants.end());
    if (hi > 0.0 && (!(lo > 0.0) || hi / lo > 10.0)) rep.flagged = true;
    return rep;
}

// Monte Carlo probe of Im(u* Lambda f(u)) = 0
inline GaugeReport check_gauge_condition(const SystemSpec& spec, int sample_count,
                                         std::uint64_t seed = 13) {
    GaugeReport rep;
    double lmax = 0.0;
    for (const Complex& z : spec.lambda) lmax = std::max(lmax, std::abs(z));
    std::vector<Complex> fu(static_cast<std::size_t>(spec.ncomp));
    for (double scale : {0.1, 1.0, 10.0}) {
        for (int s = 0; s < sample_count; ++s) {
            auto u = detail::random_cn(spec.ncomp, mix_key(seed, static_cast<std::uint64_t>(scale * 1000), s), scale);
            detail::eval_point(spec, u, fu);
            Complex q(0, 0);
            for (int i = 0; i < spec.ncomp; ++i)
                for (int j = 0; j < spec.ncomp; ++j)
                    q += std::conj(u[static_cast<std::size_t>(i)]) * spec.lambda_at(i, j) * fu[static_cast<std::size_t>(j)];
            const double mag = detail::abs_cn(u);
            const double denom = lmax * spec.ncomp * std::max(std::pow(mag, spec.p + 2.0), 1e-300);
            rep.worst_normalized = std::max(rep.worst_normalized, std::abs(q.imag()) / denom);
        }
    }
    rep.pass = rep.worst_normalized <= 1e-12;
    return rep;
}

// <u | Lambda u> = Re sum_{j,k} int Lambda_{jk} u_k conj(u_j) dx
inline double mass_functional(const SystemSpec& spec, const SpectralField& u) {
    SpectralField phys = u.in_view(View::physical);
    const std::size_t npts = phys.npoints();
    double acc = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
        Complex q(0, 0);
        for (int a = 0; a < spec.ncomp; ++a)
            for (int b = 0; b < spec.ncomp; ++b)
                q += std::conj(phys.comp(a)[i]) * spec.lambda_at(a, b) * phys.comp(b)[i];
        acc += q.real();
    }
    return acc * phys.grid().cell_volume();
}

// Structural validation: nonzero masses, Hermitian positive-definite Lambda
// commuting with M, and the statistical assumption checks. Invalid systems
// abort before any solver run.
inline void validate_system(const SystemSpec& spec, int mc_samples = 400) {
    if (spec.ncomp < 1) throw ConfigError("system: component count must be >= 1");
    if (static_cast<int>(spec.masses.size()) != spec.ncomp)
        throw ConfigError("system: mass diagonal size mismatch");
    for (double m : spec.masses)
        if (m == 0.0) throw ConfigError("system: mass matrix entries must be nonzero");
    if (static_cast<int>(spec.lambda.size()) != spec.ncomp * spec.ncomp)
        throw ConfigError("system: Lambda must be N x N");
    if (!(spec.p > 0.0)) throw ConfigError("system: growth exponent p must be positive");

    if (linalg::hermiticity_defect(spec.lambda, spec.ncomp) > 1e-12)
        throw ConfigError("system: Lambda is not Hermitian");
    const auto ev = linalg::hermitian_eigenvalues(spec.lambda, spec.ncomp);
    for (double e : ev)
        if (!(e > 0.0)) throw ConfigError("system: Lambda is not positive definite");

    double commute = 0.0, scale = 0.0;
    for (int i = 0; i < spec.ncomp; ++i)
        for (int j = 0; j < spec.ncomp; ++j) {
            const double dm = spec.masses[static_cast<std::size_t>(i)] - spec.masses[static_cast<std::size_t>(j)];
            commute = std::max(commute, std::abs(spec.lambda_at(i, j)) * std::abs(dm));
            scale = std::max(scale, std::abs(spec.lambda_at(i, j)) *
                                        std::max(std::abs(spec.masses[static_cast<std::size_t>(i)]), 1.0));
        }
    if (commute > 1e-14 * std::max(scale, 1.0))
        throw ConfigError("system: Lambda does not commute with M");

    const GrowthReport growth = check_growth_bound(spec, mc_samples);
    if (growth.flagged) throw ConfigError("system: growth bound check failed (not power-type of order p)");
    const GaugeReport gauge = check_gauge_condition(spec, mc_samples);
    if (!gauge.pass) throw ConfigError("system: gauge condition Im(u* Lambda f(u)) = 0 fails");
}

// ---------------------------------------------------------------------------
// Built-in systems
// ---------------------------------------------------------------------------

// i u_t + mass Delta u = coupling |u|^p u
inline SystemSpec scalar_power_system(double coupling, double p, double mass = 1.0) {
    SystemSpec s;
    s.name = "scalar-power";
    s.ncomp = 1;
    s.masses = {mass};
    s.p = p;
    s.lambda = {Complex(1.0, 0.0)};
    s.gauge_diagonal = true;
    s.scalar_coupling = coupling;
    s.f = [coupling, p](std::span<const Complex> u, std::span<Complex> out) {
        out[0] = coupling * std::pow(std::abs(u[0]), p) * u[0];
    };
    validate_system(s);
    return s;
}

// the quadratic two-component system:
//   i u_t + (1/2m1) Delta u = lambda conj(u) v
//   i v_t + (1/2m2) Delta v = mu u^2
// requires lambda mu real and positive; Lambda = diag(|mu|, |lambda|)
inline SystemSpec quadratic_system(double m1, double m2, Complex lam, Complex mu) {
    if (m1 == 0.0 || m2 == 0.0) throw ConfigError("quadratic system: masses must be nonzero");
    const Complex prod = lam * mu;
    if (std::abs(prod.imag()) > 1e-14 * std::abs(prod) || !(prod.real() > 0.0))
        throw ConfigError("quadratic system: lambda*mu must be real and positive");
    SystemSpec s;
    s.name = "quadratic-2system";
    s.ncomp = 2;
    s.masses = {1.0 / (2.0 * m1), 1.0 / (2.0 * m2)};
    s.p = 1.0;
    s.lambda = {Complex(std::abs(mu), 0), Complex(0, 0), Complex(0, 0), Complex(std::abs(lam), 0)};
    s.gauge_diagonal = false;
    s.f = [lam, mu](std::span<const Complex> u, std::span<Complex> out) {
        out[0] = lam * std::conj(u[0]) * u[1];
        out[1] = mu * u[0] * u[0];
    };
    validate_system(s);
    return s;
}

}  // namespace dscatter
