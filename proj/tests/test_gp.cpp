#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "dscatter/gp.hpp"
#include "dscatter/randomize.hpp"
#include "support/oracles.hpp"

using namespace dscatter;

namespace {

SpectralField smooth_random(const Grid& g, unsigned seed, double amp) {
    SpectralField f(g, 1, View::physical);
    for (std::size_t i = 0; i < f.raw().size(); ++i)
        f.raw()[i] = Complex(standard_normal(mix_key(seed, 2u * i)),
                             standard_normal(mix_key(seed, 2u * i + 1)));
    FourierSymbol lp{[](const Wavevector& xi) { return Complex(std::exp(-0.5 * norm2(xi))); },
                     ZeroModePolicy::keep};
    f = apply_symbol(f, lp);
    f *= amp / f.max_abs();
    return f;
}

}  // namespace

TEST_CASE("transform M", "[gp]") {
    Grid g(3, 16, 16.0);

    SECTION("M(0) = 0") {
        SpectralField zero(g, 1, View::physical);
        REQUIRE(transform_M(zero).max_abs() == 0.0);
    }

    SECTION("purely imaginary sine mode matches the two-mode hand expansion") {
        // u = i eps sin(xi0 x1): M(u) = i eps U(|xi0|) sin + eps^2/4
        //                        - eps^2 cos(2 xi0 x1) / (2 (2+4 xi0^2))
        const double eps = 0.3;
        const double xi0 = 2.0 * std::numbers::pi / 16.0;
        SpectralField u(g, 1, View::physical);
        auto data = u.comp(0);
        for_each_point(g, [&](std::size_t idx, const Wavevector& x) {
            data[idx] = Complex(0.0, eps * std::sin(xi0 * x[0]));
        });
        SpectralField m = transform_M(u);
        const double Uxi = gp_U(xi0 * xi0);
        double maxerr = 0.0;
        auto md = m.comp(0);
        for_each_point(g, [&](std::size_t idx, const Wavevector& x) {
            const Complex expect(
                eps * eps / 4.0 -
                    eps * eps * std::cos(2.0 * xi0 * x[0]) / (2.0 * (2.0 + 4.0 * xi0 * xi0)),
                eps * Uxi * std::sin(xi0 * x[0]));
            maxerr = std::max(maxerr, std::abs(md[idx] - expect));
        });
        REQUIRE(maxerr < 1e-12);
    }

    SECTION("quadratic remainder: slope two in the amplitude") {
        SpectralField u = smooth_random(g, 7u, 1.0);
        std::vector<double> deltas{0.02, 0.01, 0.005, 0.0025}, rems;
        for (double d : deltas) {
            SpectralField ud = u;
            ud *= d;
            SpectralField lin = gpdetail::real_part(ud);
            lin.axpy(Complex(0.0, 1.0),
                     gpdetail::real_part(apply_combined(gpdetail::imag_part(ud), gpdetail::sym_U())));
            SpectralField rem = transform_M(ud);
            rem -= lin;
            rems.push_back(rem.l2_norm());
        }
        const double slope = oracles::loglog_slope(deltas, rems);
        REQUIRE(slope == Catch::Approx(2.0).margin(0.05));
    }
}

TEST_CASE("inversion of the M transform", "[gp]") {
    Grid g(3, 16, 16.0);

    SECTION("g(0) = 0") {
        SpectralField zero(g, 1, View::physical);
        GpInversion inv = invert_g(zero);
        REQUIRE(inv.u.max_abs() == 0.0);
    }

    SECTION("round trip: transform_M(invert_g(phi)) = U phi to 1e-10") {
        for (unsigned seed : {3u, 4u, 5u}) {
            SpectralField phi = smooth_random(g, seed, 0.15);
            GpInversion inv = invert_g(phi);
            SpectralField lhs = transform_M(inv.u);
            SpectralField rhs = gpdetail::real_part(apply_combined(gpdetail::real_part(phi), gpdetail::sym_U()));
            rhs.axpy(Complex(0.0, 1.0),
                     gpdetail::real_part(apply_combined(gpdetail::imag_part(phi), gpdetail::sym_U())));
            SpectralField diff = lhs - rhs;
            REQUIRE(diff.l2_norm() < 1e-10);
        }
    }

    SECTION("lipschitz bound over random pairs") {
        double worst = 0.0, worst_contraction = 0.0;
        for (unsigned seed = 0; seed < 40; ++seed) {
            SpectralField phi = smooth_random(g, 100u + seed, 0.12);
            SpectralField psi = smooth_random(g, 200u + seed, 0.12);
            GpInversion a = invert_g(phi), b = invert_g(psi);
            SpectralField du = a.u - b.u;
            SpectralField dphi = phi - psi;
            worst = std::max(worst, h1_norm(du) / h1_norm(dphi));
            worst_contraction = std::max(worst_contraction, std::max(a.contraction, b.contraction));
        }
        REQUIRE(std::isfinite(worst));
        REQUIRE(worst <= 2.0 / (1.0 - worst_contraction) + 0.5);
    }

    SECTION("threshold violation raises a precondition error") {
        SpectralField phi = smooth_random(g, 9u, 1.0);
        phi *= 100.0 / lp_norm_x(phi, 3.0);
        REQUIRE_THROWS_AS(invert_g(phi), PreconditionError);
    }

    SECTION("zero-mode information loss vanishes with the amplitude") {
        // zeta = U^{-1} M(u) through the cancellation chain drops the torus
        // zero mode of the real part; the induced round-trip error scales
        // with mean(|u|^2) and sits below 1e-9 for small data
        SpectralField u = smooth_random(g, 11u, 5e-4);
        SpectralField w = gpdetail::real_part(u);
        w += gpdetail::real_part(apply_combined(gpdetail::abs_squared(u), gpdetail::sym_B2()));
        CombinedSymbol uinv = combined_symbol({{GpOp::Uinv, 1.0}});
        REQUIRE(uinv.zero_mode_flagged);
        SpectralField zeta = apply_combined(w, uinv);
        SpectralField u2 = gpdetail::imag_part(u);
        Complex mean2(0, 0);
        for (const Complex& z : u2.raw()) mean2 += z;
        mean2 /= static_cast<double>(g.npoints());
        for (Complex& z : u2.raw()) z -= mean2;
        zeta.axpy(Complex(0.0, 1.0), u2);
        GpInversion inv = invert_g(zeta);
        SpectralField diff = inv.u - u;
        REQUIRE(h1_norm(diff) < 1e-9);
    }
}

TEST_CASE("gp nonlinearity", "[gp]") {
    Grid g(3, 16, 16.0);

    SECTION("N(0) = 0") {
        SpectralField zero(g, 1, View::physical);
        REQUIRE(eval_N(zero).max_abs() == 0.0);
    }

    SECTION("real input gives 2 u1^2 + u1^3, purely real") {
        SpectralField u = gpdetail::real_part(smooth_random(g, 13u, 0.4));
        SpectralField n = eval_N(u);
        double maxerr = 0.0, maximag = 0.0;
        for (std::size_t i = 0; i < g.npoints(); ++i) {
            const double a = u.comp(0)[i].real();
            maxerr = std::max(maxerr, std::abs(n.comp(0)[i].real() - (2.0 * a * a + a * a * a)));
            maximag = std::max(maximag, std::abs(n.comp(0)[i].imag()));
        }
        REQUIRE(maxerr < 1e-12);
        REQUIRE(maximag < 1e-12);
    }

    SECTION("quadratic and cubic parts scale with slopes 2 and 3") {
        SpectralField u = smooth_random(g, 17u, 1.0);
        const double d0 = 1e-4;
        SpectralField u0 = u;
        u0 *= d0;
        SpectralField quad = eval_N(u0);
        quad *= 1.0 / (d0 * d0);  // quadratic part estimate

        std::vector<double> deltas{0.02, 0.01, 0.005}, full, cubic;
        for (double d : deltas) {
            SpectralField ud = u;
            ud *= d;
            SpectralField n = eval_N(ud);
            full.push_back(n.l2_norm());
            SpectralField c = n;
            c.axpy(-d * d, quad);
            cubic.push_back(c.l2_norm());
        }
        REQUIRE(oracles::loglog_slope(deltas, full) == Catch::Approx(2.0).margin(0.05));
        REQUIRE(oracles::loglog_slope(deltas, cubic) == Catch::Approx(3.0).margin(0.05));
    }

    SECTION("the singular divergence part carries no zero-mode energy") {
        SpectralField u = smooth_random(g, 19u, 0.5);
        SpectralField n = eval_N(u);
        // mean of N equals the mean of the regular real part exactly
        Complex meanN(0, 0), meanR(0, 0);
        for (std::size_t i = 0; i < g.npoints(); ++i) {
            meanN += n.comp(0)[i];
            const double a = u.comp(0)[i].real();
            const double r2 = std::norm(u.comp(0)[i]);
            meanR += Complex(2.0 * a * a + r2 * a, 0.0);
        }
        REQUIRE(std::abs(meanN - meanR) / static_cast<double>(g.npoints()) < 1e-13);
    }
}

TEST_CASE("gp picard solver on a randomized datum", "[gp][slow]") {
    Grid g(3, 16, 16.0 * std::numbers::pi);
    BumpPartition part = build_partition(g, /*strict=*/false);
    SpectralField prof(g, 1, View::physical);
    auto data = prof.comp(0);
    for_each_point(g, [&](std::size_t idx, const Wavevector& x) {
        data[idx] = 0.02 * std::exp(-0.5 * norm2(x) / 4.0);
    });
    RandomizedField zp = randomize_h1dot(prof, CoefficientLaw::gaussian(), 42, part);
    REQUIRE(zp.meta.zero_mode_dropped);

    GpSolverConfig cfg;
    cfg.Tmax = 12.0;
    cfg.n_time = 48;
    cfg.tol = 1e-7;
    GpSolveOutcome out = gp_picard_solve_outcome(zp.field, cfg);
    CAPTURE(out.report.failure, out.report.eta_free);
    REQUIRE(out.ok);

    SECTION("contraction is fast and the residual oracle holds") {
        for (double r : out.report.contraction_ratios) REQUIRE(r < 0.5);
        REQUIRE(out.report.residual_self <= cfg.tol);
        REQUIRE(out.report.residual_doubled <= 10.0 * cfg.tol);
    }

    SECTION("uniqueness probe lands on the same fixed point") {
        REQUIRE(gp_uniqueness_probe(zp.field, out) <= 10.0 * cfg.tol);
    }

    SECTION("decay rates of the differences meet the epsilon target") {
        GpRateReport rr = gp_verify_rates(out.zeta, out.u, zp.field, cfg.epsilon);
        REQUIRE(rr.fits_valid);
        REQUIRE(rr.zeta_fit.exponent <= -(cfg.epsilon - 0.05));
        REQUIRE(rr.v_fit.exponent <= -(cfg.epsilon - 0.05));
        REQUIRE(rr.corr_fit.exponent <= -(cfg.epsilon - 0.05));
    }

    SECTION("u trajectory stays inside the inversion ball with finite energy") {
        for (const SpectralField& uu : out.u.fields) {
            REQUIRE(lp_norm_x(uu, 3.0) <= cfg.eta_star);
            GpEnergy e = gp_energy(uu);
            REQUIRE(std::isfinite(e.route_a));
            REQUIRE(e.route_b == Catch::Approx(e.route_a).epsilon(1e-8));
        }
    }

    SECTION("u = 0 trajectory gives v = zeta in the rate report") {
        Trajectory zero_u = out.u;
        for (SpectralField& f : zero_u.fields) f *= 0.0;
        GpRateReport rr = gp_verify_rates(out.zeta, zero_u, zp.field, cfg.epsilon);
        for (double c : rr.correction_h1) REQUIRE(c == 0.0);
        for (std::size_t j = 0; j < rr.times.size(); ++j)
            REQUIRE(rr.v_diff_h1[j] == Catch::Approx(rr.zeta_diff_h1[j]).margin(1e-14));
    }
}

TEST_CASE("gp forward integration", "[gp]") {
    Grid g(3, 16, 16.0 * std::numbers::pi);

    SECTION("linear step agrees with the exp(-itH) oracle on z = u1 + i U u2") {
        SpectralField u = smooth_random(g, 21u, 0.3);
        SpectralField z0 = gpdetail::real_part(u);
        z0.axpy(Complex(0.0, 1.0),
                gpdetail::real_part(apply_combined(gpdetail::imag_part(u), gpdetail::sym_U())));
        const double h = 0.15;
        SpectralField uh = u;
        gpdetail::gp_linear_step(uh, h);
        SpectralField zh = gpdetail::real_part(uh);
        zh.axpy(Complex(0.0, 1.0),
                gpdetail::real_part(apply_combined(gpdetail::imag_part(uh), gpdetail::sym_U())));
        SpectralField expect = gp_propagate(z0, h);
        SpectralField diff = zh - expect;
        REQUIRE(diff.max_abs() < 1e-12);
    }

    SECTION("energy drift is second order in dt") {
        SpectralField u = smooth_random(g, 23u, 0.2);
        const double e0 = gp_energy(u).route_a;
        auto drift = [&](double dt) {
            auto s = gp_extend_forward(u, 0.0, 1.0, dt, {1.0});
            return std::abs(gp_energy(s[0]).route_a - e0) / e0;
        };
        const double d1 = drift(0.1);
        const double d2 = drift(0.05);
        CAPTURE(d1, d2);
        REQUIRE(d1 < 1e-3);
        REQUIRE(d2 < 0.35 * d1);
    }
}

TEST_CASE("gp fixed point satisfies the u-equation forward in time", "[gp][slow]") {
    Grid g(3, 16, 16.0 * std::numbers::pi);
    BumpPartition part = build_partition(g, false);
    SpectralField prof(g, 1, View::physical);
    auto data = prof.comp(0);
    for_each_point(g, [&](std::size_t idx, const Wavevector& x) {
        data[idx] = 0.02 * std::exp(-0.5 * norm2(x) / 4.0);
    });
    RandomizedField zp = randomize_h1dot(prof, CoefficientLaw::gaussian(), 7, part);
    GpSolverConfig cfg;
    cfg.Tmax = 12.0;
    cfg.n_time = 48;
    cfg.tol = 1e-8;
    GpSolveOutcome out = gp_picard_solve_outcome(zp.field, cfg);
    REQUIRE(out.ok);

    // integrate u = g(zeta) from T node-to-node up to 2T and compare
    SpectralField u = out.u.fields[0];
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < out.u.times.size() && out.u.times[j + 1] <= 2.0 * out.report.T;
         ++j) {
        const double ta = out.u.times[j], tb = out.u.times[j + 1];
        const int nsub = std::max(1, static_cast<int>(std::ceil((tb - ta) / 0.05)));
        u = gp_extend_forward(u, ta, tb, (tb - ta) / nsub, {tb})[0];
        SpectralField diff = u - out.u.fields[j + 1];
        worst = std::max(worst, diff.l2_norm());
    }
    // budget: splitting + solver quadrature + g-inversion tolerance
    REQUIRE(worst < 1e-6);
}
