#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstring>
#include <numbers>
#include <random>

#include "dscatter/randomize.hpp"
#include "support/oracles.hpp"

using namespace dscatter;

namespace {

SpectralField gaussian_profile(const Grid& g, double amp, double width) {
    SpectralField f(g, 1, View::physical);
    auto data = f.comp(0);
    for_each_point(g, [&](std::size_t idx, const Wavevector& x) {
        data[idx] = amp * std::exp(-0.5 * norm2(x) / (width * width));
    });
    return f;
}

// brute-force chi_k(x) by direct evaluation of the defining quotient over all
// lattice cells (torus min-image), independent of BumpPartition internals
double chi_k_direct(const Grid& g, const Wavevector& x, const std::array<int, 3>& k) {
    const double L = g.box_length;
    auto mindist = [L](double a) {
        a = std::fmod(a, L);
        if (a > L / 2) a -= L;
        if (a < -L / 2) a += L;
        return a;
    };
    auto chi_at = [&](const std::array<int, 3>& cell) {
        double r2 = 0;
        for (int a = 0; a < g.dim; ++a) {
            const double d = mindist(x[static_cast<std::size_t>(a)] - cell[static_cast<std::size_t>(a)]);
            r2 += d * d;
        }
        return bump_chi(std::sqrt(r2));
    };
    const int kmin = static_cast<int>(std::ceil(-L / 2.0));
    const int kmax = static_cast<int>(std::ceil(L / 2.0)) - 1;
    double denom = 0;
    std::array<int, 3> l{0, 0, 0};
    for (l[0] = kmin; l[0] <= kmax; ++l[0])
        for (l[1] = g.dim > 1 ? kmin : 0; l[1] <= (g.dim > 1 ? kmax : 0); ++l[1])
            for (l[2] = g.dim > 2 ? kmin : 0; l[2] <= (g.dim > 2 ? kmax : 0); ++l[2])
                denom += chi_at(l);
    return chi_at(k) / denom;
}

}  // namespace

TEST_CASE("partition of unity", "[randomize]") {
    SECTION("sums to one at every grid point") {
        for (int d : {1, 2}) {
            Grid g(d, 64, 16.0);
            BumpPartition part = build_partition(g);
            for (double s : partition_sum(part)) REQUIRE(std::abs(s - 1.0) < 1e-12);
        }
    }

    SECTION("sums to one on a non-integer box (coarse GP-style grid)") {
        Grid g(3, 32, 16.0 * std::numbers::pi);
        BumpPartition part = build_partition(g, /*strict=*/false);
        REQUIRE(part.coarse_grid);
        for (double s : partition_sum(part)) REQUIRE(std::abs(s - 1.0) < 1e-12);
    }

    SECTION("bump vanishes beyond radius two") {
        Grid g(1, 128, 16.0);
        REQUIRE(bump_chi(2.0) == 0.0);
        REQUIRE(bump_chi(2.5) == 0.0);
        REQUIRE(bump_chi(0.99) == 1.0);
        BumpPartition part = build_partition(g);
        std::vector<double> chi0(g.npoints(), 0.0);
        const std::array<int, 3> k0{3, 0, 0};
        part.for_cell_support(k0, [&](std::size_t idx, double chi) {
            chi0[idx] = chi / part.denom[idx];
        });
        for_each_point(g, [&](std::size_t idx, const Wavevector& x) {
            double dxk = std::fmod(std::abs(x[0] - 3.0), 16.0);
            dxk = std::min(dxk, 16.0 - dxk);
            if (dxk > 2.0) REQUIRE(chi0[idx] == 0.0);
        });
    }

    SECTION("value at the cell centre matches the direct quotient (1/3 in 1d)") {
        Grid g(1, 128, 16.0);
        const std::array<int, 3> k0{2, 0, 0};
        const double direct = chi_k_direct(g, {2.0, 0.0, 0.0}, k0);
        REQUIRE(direct == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
        BumpPartition part = build_partition(g);
        const std::size_t idx_k0 = g.ravel({static_cast<int>(2.0 / g.dx()), 0, 0});
        part.for_cell_support(k0, [&](std::size_t idx, double chi) {
            if (idx == idx_k0) REQUIRE(chi / part.denom[idx] == Catch::Approx(direct).epsilon(1e-12));
        });
    }

    SECTION("box below 8 lattice units is rejected") {
        REQUIRE_THROWS_AS(build_partition(Grid(1, 32, 6.0)), ConfigError);
    }

    SECTION("coarse grids are rejected unless overridden") {
        Grid g(1, 16, 16.0);  // dx = 1
        REQUIRE_THROWS_AS(build_partition(g), ConfigError);
        REQUIRE(build_partition(g, false).coarse_grid);
    }
}

TEST_CASE("l2 randomization", "[randomize]") {
    Grid g(1, 256, 16.0);
    BumpPartition part = build_partition(g);
    SpectralField u = gaussian_profile(g, 1.0, 1.5);

    SECTION("identity matrices reproduce the profile") {
        RandomizedField r = randomize_l2(u, CoefficientLaw::identity(), 1, part);
        SpectralField diff = r.field - u;
        REQUIRE(diff.max_abs() < 1e-13);
    }

    SECTION("matches the definitional sum with brute-force bumps") {
        const std::uint64_t seed = 77;
        const CoefficientLaw law = CoefficientLaw::gaussian();
        RandomizedField r = randomize_l2(u, law, seed, part);
        RandomMatrixDraw draw{seed, law, 1};

        std::mt19937_64 pick(5);
        std::uniform_int_distribution<std::size_t> uidx(0, g.npoints() - 1);
        for (int probe = 0; probe < 20; ++probe) {
            const std::size_t idx = uidx(pick);
            const auto iv = g.unravel(idx);
            const Wavevector x = g.position(iv);
            Complex expect(0, 0);
            for (const auto& cell : part.cells)
                expect += chi_k_direct(g, x, cell) * draw.entry(cell, 0, 0) * u.comp(0)[idx];
            REQUIRE(std::abs(r.field.comp(0)[idx] - expect) < 1e-12);
        }
    }

    SECTION("reproducible: identical seed gives byte-identical data") {
        const CoefficientLaw law = CoefficientLaw::uniform_unit_variance();
        RandomizedField a = randomize_l2(u, law, 1234, part);
        RandomizedField b = randomize_l2(u, law, 1234, part);
        REQUIRE(std::memcmp(a.field.raw().data(), b.field.raw().data(),
                            a.field.raw().size() * sizeof(Complex)) == 0);
        RandomizedField c = randomize_l2(u, law, 1235, part);
        REQUIRE(std::memcmp(a.field.raw().data(), c.field.raw().data(),
                            a.field.raw().size() * sizeof(Complex)) != 0);
    }

    SECTION("ensemble mean vanishes pointwise within monte-carlo error") {
        const int nseeds = 10000;
        const std::array<std::size_t, 3> probes{40, 128, 200};
        std::array<double, 3> mean{0, 0, 0}, m2{0, 0, 0};
        for (int s = 0; s < nseeds; ++s) {
            RandomizedField r =
                randomize_l2(u, CoefficientLaw::gaussian(), static_cast<std::uint64_t>(s), part);
            for (std::size_t p = 0; p < probes.size(); ++p) {
                const double v = r.field.comp(0)[probes[p]].real();
                mean[p] += v;
                m2[p] += v * v;
            }
        }
        for (std::size_t p = 0; p < probes.size(); ++p) {
            mean[p] /= nseeds;
            const double var = m2[p] / nseeds - mean[p] * mean[p];
            const double se = std::sqrt(std::max(var, 1e-30) / nseeds);
            if (se > 1e-15) REQUIRE(std::abs(mean[p]) < 3.0 * se);
        }
    }

    SECTION("second moment of the L2 norm stays comparable to the profile") {
        const int nseeds = 1000;
        const double base = u.l2_norm() * u.l2_norm();
        double acc = 0.0;
        for (int s = 0; s < nseeds; ++s) {
            RandomizedField r =
                randomize_l2(u, CoefficientLaw::gaussian(), 5000 + static_cast<std::uint64_t>(s), part);
            acc += r.field.l2_norm() * r.field.l2_norm();
        }
        const double ratio = acc / nseeds / base;
        REQUIRE(ratio > 0.1);
        REQUIRE(ratio < 1.5);  // E|u^w|_2^2 = int (sum_k chi_k^2/D^2)|u|^2 <= |u|_2^2
    }

    SECTION("two-component profile mixes components through G_k") {
        SpectralField u2(g, 2, View::physical);
        for (std::size_t i = 0; i < g.npoints(); ++i) {
            u2.comp(0)[i] = u.comp(0)[i];
            u2.comp(1)[i] = 0.5 * u.comp(0)[i];
        }
        RandomizedField r = randomize_l2(u2, CoefficientLaw::gaussian(), 3, part);
        REQUIRE(r.field.components() == 2);
        REQUIRE(r.field.all_finite());
    }
}

TEST_CASE("h1dot randomization", "[randomize]") {
    Grid g(1, 256, 16.0);
    BumpPartition part = build_partition(g);
    SpectralField phi = gaussian_profile(g, 1.0, 1.5);

    auto hdot_norm = [&](const SpectralField& f, double s) {
        FourierSymbol sym{[s](const Wavevector& xi) { return Complex(std::pow(norm(xi), s)); },
                          ZeroModePolicy::zero};
        return apply_symbol(f, sym).l2_norm();
    };

    SECTION("identity mode yields the mean-zero projection") {
        RandomizedField r = randomize_h1dot(phi, CoefficientLaw::identity(), 1, part);
        REQUIRE(r.meta.zero_mode_dropped);
        Complex mean(0, 0);
        for (const Complex& z : phi.comp(0)) mean += z;
        mean /= static_cast<double>(g.npoints());
        SpectralField expect = phi;
        for (Complex& z : expect.comp(0)) z -= mean;
        SpectralField diff = r.field - expect;
        REQUIRE(diff.max_abs() < 1e-12);
    }

    SECTION("H1dot and negative-order norms stay finite across an ensemble") {
        for (int s = 0; s < 100; ++s) {
            RandomizedField r =
                randomize_h1dot(phi, CoefficientLaw::gaussian(), static_cast<std::uint64_t>(s), part);
            const double h1 = hdot_norm(r.field, 1.0);
            const double hneg = hdot_norm(r.field, -0.25);
            REQUIRE(std::isfinite(h1));
            REQUIRE(std::isfinite(hneg));
            REQUIRE(h1 < 100.0 * phi.l2_norm() / g.dx());  // crude scale bound
            REQUIRE(hneg < 100.0 * phi.l2_norm());
        }
    }
}

TEST_CASE("large deviation scaling of coefficient sums", "[randomize][largedev]") {
    // || sum_k g_k c_k ||_{L^alpha_omega} <= C sqrt(alpha) ||c||_{l2}
    const std::vector<double> c{0.3, -1.2, 0.7, 0.1, 2.0, -0.4, 0.9, -0.8};
    double cnorm = 0;
    for (double v : c) cnorm += v * v;
    cnorm = std::sqrt(cnorm);

    for (const CoefficientLaw& law :
         {CoefficientLaw::gaussian(), CoefficientLaw::uniform_unit_variance(),
          CoefficientLaw::rademacher()}) {
        const int nsamp = 100000;
        std::vector<double> alphas{2, 4, 8, 16};
        std::vector<double> ratios;
        for (double alpha : alphas) {
            double acc = 0;
            for (int s = 0; s < nsamp; ++s) {
                double sum = 0;
                for (std::size_t k = 0; k < c.size(); ++k)
                    sum += law.sample(mix_key(static_cast<std::uint64_t>(s), 17u, k)) * c[k];
                acc += std::pow(std::abs(sum), alpha);
            }
            ratios.push_back(std::pow(acc / nsamp, 1.0 / alpha) / (std::sqrt(alpha) * cnorm));
        }
        const double rmax = *std::max_element(ratios.begin(), ratios.end());
        REQUIRE(rmax < 1.0);
        // monotone-bounded: the lemma is an upper bound, so ratios may fall
        // with alpha but must never step up by more than the 25% tolerance
        for (std::size_t j = 0; j + 1 < ratios.size(); ++j)
            REQUIRE(ratios[j + 1] <= 1.25 * ratios[j]);
    }
}

TEST_CASE("law moment diagnostics", "[randomize]") {
    for (const CoefficientLaw& law :
         {CoefficientLaw::gaussian(0.5), CoefficientLaw::uniform(2.0), CoefficientLaw::rademacher()}) {
        const int nsamp = 100000;
        double mean = 0, m2 = 0;
        for (int s = 0; s < nsamp; ++s) {
            const double v = law.sample(mix_key(99u, static_cast<std::uint64_t>(s)));
            mean += v;
            m2 += v * v;
        }
        mean /= nsamp;
        const double var = m2 / nsamp - mean * mean;
        REQUIRE(std::abs(mean) < 3.0 * std::sqrt(var / nsamp));
        REQUIRE(var == Catch::Approx(law.variance()).epsilon(0.05));
        REQUIRE(law.mgf_constant() >= 0.5 * law.variance() - 1e-12);
    }
}
