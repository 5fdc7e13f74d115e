#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dscatter/norms.hpp"
#include "dscatter/system.hpp"
#include "support/oracles.hpp"

using namespace dscatter;

namespace {

SpectralField smooth_random(const Grid& g, int ncomp, unsigned seed, double amp = 0.4) {
    SpectralField f(g, ncomp, View::physical);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, amp);
    for (Complex& z : f.raw()) z = Complex(dist(rng), dist(rng));
    FourierSymbol lp{[](const Wavevector& xi) { return Complex(std::exp(-0.5 * norm2(xi))); },
                     ZeroModePolicy::keep};
    return apply_symbol(f, lp);
}

// a deliberately invalid nonlinearity with exponential growth
SystemSpec exponential_system() {
    SystemSpec s;
    s.name = "exp-invalid";
    s.ncomp = 1;
    s.masses = {1.0};
    s.p = 1.0;
    s.lambda = {Complex(1.0, 0.0)};
    s.f = [](std::span<const Complex> u, std::span<Complex> out) {
        out[0] = std::exp(std::abs(u[0])) * u[0];
    };
    return s;
}

}  // namespace

TEST_CASE("nonlinearity evaluation", "[system]") {
    SystemSpec cubic = scalar_power_system(1.0, 2.0);
    SystemSpec quad = quadratic_system(1.0, 1.0, 1.0, 1.0);

    SECTION("f(0) = 0") {
        Grid g(1, 32, 8.0);
        SpectralField zero(g, 2, View::physical);
        SpectralField fz = eval_f(quad, zero);
        REQUIRE(fz.max_abs() == 0.0);
    }

    SECTION("quadratic system at (1,1) with lambda=mu=1 gives (1,1)") {
        Grid g(1, 32, 8.0);
        SpectralField u(g, 2, View::physical);
        for (std::size_t i = 0; i < g.npoints(); ++i) {
            u.comp(0)[i] = Complex(1.0, 0.0);
            u.comp(1)[i] = Complex(1.0, 0.0);
        }
        SpectralField fu = eval_f(quad, u);
        for (std::size_t i = 0; i < g.npoints(); ++i) {
            REQUIRE(std::abs(fu.comp(0)[i] - Complex(1.0, 0.0)) < 1e-14);
            REQUIRE(std::abs(fu.comp(1)[i] - Complex(1.0, 0.0)) < 1e-14);
        }
    }

    SECTION("scalar power p=2 at u=2 gives 8") {
        Grid g(1, 32, 8.0);
        SpectralField u(g, 1, View::physical);
        for (Complex& z : u.raw()) z = Complex(2.0, 0.0);
        SpectralField fu = eval_f(cubic, u);
        REQUIRE(fu.comp(0)[5] == Complex(8.0, 0.0));
    }

    SECTION("non-finite output raises a numerical error with location") {
        Grid g(1, 32, 8.0);
        SpectralField u(g, 1, View::physical);
        for (Complex& z : u.raw()) z = Complex(800.0, 0.0);
        REQUIRE_THROWS_AS(eval_f(exponential_system(), u), NumericalError);
    }
}

TEST_CASE("growth bound monte carlo", "[system]") {
    SECTION("scalar power: ratio bounded and stable across scales") {
        SystemSpec s = scalar_power_system(1.0, 3.0);
        GrowthReport rep = check_growth_bound(s, 2000);
        REQUIRE_FALSE(rep.flagged);
        for (double c : rep.constants) {
            REQUIRE(c > 0.5);
            REQUIRE(c < 1.0 + 3.0 + 0.5);  // |f(u)-f(v)| <= (p+1) max^p |u-v| for the power model
        }
    }

    SECTION("quadratic system: bilinear, bounded") {
        SystemSpec s = quadratic_system(1.0, 0.5, Complex(0.0, 1.0), Complex(0.0, -2.0));
        GrowthReport rep = check_growth_bound(s, 2000);
        REQUIRE_FALSE(rep.flagged);
    }

    SECTION("exponential nonlinearity is flagged") {
        GrowthReport rep = check_growth_bound(exponential_system(), 500);
        REQUIRE(rep.flagged);
    }
}

TEST_CASE("gauge condition monte carlo", "[system]") {
    SECTION("quadratic system with lambda=mu=1 is exactly gauge-compatible") {
        SystemSpec s = quadratic_system(1.0, 1.0, 1.0, 1.0);
        GaugeReport rep = check_gauge_condition(s, 3000);
        REQUIRE(rep.pass);
    }

    SECTION("complex couplings with lambda*mu > 0 still pass") {
        SystemSpec s = quadratic_system(2.0, 1.0, Complex(0.0, 1.5), Complex(0.0, -2.0));
        GaugeReport rep = check_gauge_condition(s, 3000);
        REQUIRE(rep.pass);
    }

    SECTION("defocusing cubic passes") {
        SystemSpec s = scalar_power_system(1.0, 2.0);
        REQUIRE(check_gauge_condition(s, 3000).pass);
    }

    SECTION("lambda=1, mu=-1 violates the gauge condition and the constructor") {
        REQUIRE_THROWS_AS(quadratic_system(1.0, 1.0, 1.0, -1.0), ConfigError);
        SystemSpec bad;
        bad.name = "bad-quadratic";
        bad.ncomp = 2;
        bad.masses = {0.5, 0.5};
        bad.p = 1.0;
        bad.lambda = {Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0)};
        bad.f = [](std::span<const Complex> u, std::span<Complex> out) {
            out[0] = std::conj(u[0]) * u[1];
            out[1] = -u[0] * u[0];
        };
        REQUIRE_FALSE(check_gauge_condition(bad, 2000).pass);
    }
}

TEST_CASE("mass functional", "[system]") {
    Grid g(1, 128, 16.0);

    SECTION("Lambda = I reduces to the squared L2 norm") {
        SystemSpec s = scalar_power_system(1.0, 2.0);
        SpectralField u = smooth_random(g, 1, 3u);
        REQUIRE(mass_functional(s, u) ==
                Catch::Approx(u.l2_norm() * u.l2_norm()).epsilon(1e-12));
    }

    SECTION("quadratic system weights components by |mu|, |lambda|") {
        SystemSpec s = quadratic_system(1.0, 1.0, Complex(0.0, 2.0), Complex(0.0, -0.5));
        SpectralField u = smooth_random(g, 2, 4u);
        SpectralField c0(g, 1, View::physical), c1(g, 1, View::physical);
        for (std::size_t i = 0; i < g.npoints(); ++i) {
            c0.comp(0)[i] = u.comp(0)[i];
            c1.comp(0)[i] = u.comp(1)[i];
        }
        const double expect = 0.5 * c0.l2_norm() * c0.l2_norm() + 2.0 * c1.l2_norm() * c1.l2_norm();
        REQUIRE(mass_functional(s, u) == Catch::Approx(expect).epsilon(1e-12));
    }

    SECTION("positive for nonzero fields") {
        SystemSpec s = quadratic_system(1.0, 1.0, 1.0, 1.0);
        SpectralField u = smooth_random(g, 2, 5u);
        REQUIRE(mass_functional(s, u) > 0.0);
    }

    SECTION("invariant under the free propagator") {
        SystemSpec s = quadratic_system(1.0, 2.0, 1.0, 1.0);
        SpectralField u = smooth_random(g, 2, 6u);
        const double before = mass_functional(s, u);
        const double after = mass_functional(s, free_propagate(u, s.masses, 2.7));
        REQUIRE(after == Catch::Approx(before).epsilon(1e-12));
    }
}

TEST_CASE("system validation", "[system]") {
    SECTION("zero mass entry rejected") {
        SystemSpec s = scalar_power_system(1.0, 2.0);
        s.masses = {0.0};
        REQUIRE_THROWS_AS(validate_system(s), ConfigError);
    }

    SECTION("non-Hermitian Lambda rejected") {
        SystemSpec s = quadratic_system(1.0, 1.0, 1.0, 1.0);
        s.lambda = {Complex(1, 0), Complex(0.5, 0.1), Complex(0, 0), Complex(1, 0)};
        REQUIRE_THROWS_AS(validate_system(s), ConfigError);
    }

    SECTION("indefinite Lambda rejected") {
        SystemSpec s = quadratic_system(1.0, 1.0, 1.0, 1.0);
        s.lambda = {Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0)};
        REQUIRE_THROWS_AS(validate_system(s), ConfigError);
    }

    SECTION("Lambda must commute with a non-scalar M") {
        SystemSpec s = quadratic_system(1.0, 1.0, 1.0, 1.0);
        s.masses = {1.0, 2.0};
        s.lambda = {Complex(1, 0), Complex(0.3, 0), Complex(0.3, 0), Complex(1, 0)};
        REQUIRE_THROWS_AS(validate_system(s), ConfigError);
    }

    SECTION("jacobi eigenvalues match hand values for a 2x2 Hermitian matrix") {
        // [[2, i],[-i, 2]] has eigenvalues 1 and 3
        std::vector<Complex> a{Complex(2, 0), Complex(0, 1), Complex(0, -1), Complex(2, 0)};
        auto ev = linalg::hermitian_eigenvalues(a, 2);
        std::sort(ev.begin(), ev.end());
        REQUIRE(ev[0] == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(ev[1] == Catch::Approx(3.0).margin(1e-12));
    }
}
