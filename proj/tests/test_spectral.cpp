#include "fracdt/spectral.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fracdt;

TEST_CASE("make_grid layout") {
    const Grid g = make_grid(1, 64.0, 1024);
    CHECK(g.spacing() == 0.0625);
    CHECK(g.size() == 1024);
    CHECK(g.coordinate(0) == -32.0);
    CHECK(g.node(g.origin())[0] == 0.0);
    CHECK(g.frequency(1)[0] == doctest::Approx(2.0 * oracle::pi / 64.0));
    CHECK(g.signed_wavenumber(512) == -512);
    CHECK(g.signed_wavenumber(1023) == -1);
    CHECK(g.is_nyquist(512));

    const Grid g2 = make_grid(2, 32.0, 256);
    CHECK(g2.size() == 256u * 256u);
    CHECK(g2.spacing() == 0.125);
    CHECK(g2.cell() == 0.125 * 0.125);
    const Point p = g2.node(3 * 256 + 7);
    CHECK(p[0] == -16.0 + 3 * 0.125);
    CHECK(p[1] == -16.0 + 7 * 0.125);
}

TEST_CASE("make_grid rejects bad input") {
    CHECK_THROWS_WITH_AS(make_grid(3, 64.0, 64), doctest::Contains("unsupported dimension"), Error);
    CHECK_THROWS_WITH_AS(make_grid(1, 64.0, 1000), doctest::Contains("unsupported resolution"), Error);
    CHECK_THROWS_WITH_AS(make_grid(1, 64.0, 8), doctest::Contains("unsupported resolution"), Error);
    CHECK_THROWS_AS(make_grid(1, -1.0, 64), Error);
}

TEST_CASE("roundtrip") {
    const Grid g = make_grid(1, 16.0, 64);
    SUBCASE("constant") {
        const SampledField one = sample(g, [](const Point&) { return 1.0; });
        CHECK(max_diff(transform_roundtrip(one), one) <= 1e-12);
    }
    SUBCASE("single mode") {
        const SampledField c = sample(g, [](const Point& x) { return std::cos(2.0 * oracle::pi * x[0] / 16.0); });
        CHECK(max_diff(transform_roundtrip(c), c) <= 1e-12);
    }
    SUBCASE("random field against a naive DFT") {
        std::mt19937_64 rng(7);
        const SampledField f = oracle::random_smooth(g, rng);
        const SpectralField s = forward(f);
        const auto ref = oracle::dft(f.values);
        for (std::size_t k = 0; k < ref.size(); ++k) CHECK(std::abs(s.coeffs[k] - ref[k]) <= 1e-11 * f.size());
        const auto back = oracle::idft_real(s.coeffs);
        const SampledField rt = transform_roundtrip(f);
        for (std::size_t i = 0; i < f.size(); ++i) CHECK(rt[i] == doctest::Approx(back[i]).epsilon(1e-12));
        CHECK(max_diff(rt, f) <= 1e-12 * f.max_abs());
    }
    SUBCASE("2D random") {
        const Grid g2 = make_grid(2, 8.0, 32);
        std::mt19937_64 rng(3);
        const SampledField f = oracle::random_noise(g2, rng);
        CHECK(max_diff(transform_roundtrip(f), f) <= 1e-12 * f.max_abs());
    }
}

TEST_CASE("apply_multiplier") {
    const Grid g = make_grid(1, 32.0, 128);
    std::mt19937_64 rng(11);
    const SampledField f = oracle::random_smooth(g, rng);
    const Multiplier id{[](const Frequency&) { return std::complex<double>(1.0, 0.0); }, "one"};
    const Multiplier zero{[](const Frequency&) { return std::complex<double>(0.0, 0.0); }, "zero"};
    CHECK(max_diff(apply_multiplier(f, id), f) <= 1e-12 * f.max_abs());
    CHECK(apply_multiplier(f, zero).max_abs() == 0.0);

    const double t = 0.3, xi0 = 2.0 * oracle::pi * 3.0 / 32.0;
    const SampledField mode = sample(g, [&](const Point& x) { return std::cos(xi0 * x[0]); });
    const SampledField out = apply_multiplier(mode, heat_multiplier(t, 1.0));
    CHECK(max_diff(out, std::exp(-t * xi0 * xi0) * mode) <= 1e-12);
}

TEST_CASE("non-symmetric symbol is rejected") {
    const Grid g = make_grid(1, 32.0, 64);
    std::mt19937_64 rng(5);
    const SampledField f = oracle::random_smooth(g, rng);
    const Multiplier odd_real{[](const Frequency& xi) { return std::complex<double>(xi[0], 0.0); }, "xi"};
    CHECK_THROWS_AS(apply_multiplier(f, odd_real), ImaginaryResidueError);
}

TEST_CASE("Nyquist uses the real part") {
    const Grid g = make_grid(1, 16.0, 16);
    const SampledField alt = sample(g, [&](const Point& x) { return std::cos(oracle::pi / g.spacing() * x[0]); });
    const Multiplier m{[](const Frequency& xi) { return std::complex<double>(0.5, xi[0]); }, "mixed"};
    CHECK(max_diff(apply_multiplier(alt, m), 0.5 * alt) <= 1e-12);
}

TEST_CASE("heat semigroup") {
    const Grid g = make_grid(1, 64.0, 1024);
    SUBCASE("constants are fixed") {
        const SampledField c = sample(g, [](const Point&) { return 2.5; });
        for (double a : {0.3, 0.5, 1.0}) CHECK(max_diff(heat_semigroup(c, 1.7, a), c) <= 1e-12);
    }
    SUBCASE("Gaussian convolution identity") {
        const double s = 1.0, t = 0.75;
        auto density = [](double var) {
            return [var](const Point& x) { return std::exp(-x[0] * x[0] / (2.0 * var)) / std::sqrt(2.0 * oracle::pi * var); };
        };
        const SampledField out = heat_semigroup(sample(g, density(s)), t, 1.0);
        CHECK(max_diff(out, sample(g, density(s + 2.0 * t))) <= 1e-12);
    }
    SUBCASE("strong continuity at 0") {
        std::mt19937_64 rng(2);
        const SampledField f = oracle::random_smooth(g, rng);
        for (double a : {0.3, 0.5, 0.75, 1.0}) CHECK(max_diff(heat_semigroup(f, 1e-8, a), f) <= 1e-6);
    }
    SUBCASE("invalid parameters") {
        const SampledField f(g);
        CHECK_THROWS_AS(heat_semigroup(f, 0.0, 0.5), Error);
        CHECK_THROWS_AS(heat_semigroup(f, -1.0, 0.5), Error);
        CHECK_THROWS_AS(heat_semigroup(f, 1.0, 0.0), Error);
        CHECK_THROWS_AS(heat_semigroup(f, 1.0, 1.5), Error);
    }
}

TEST_CASE("heat semigroup properties") {
    std::mt19937_64 rng(19);
    for (int dim : {1, 2}) {
        const Grid g = make_grid(dim, 16.0, dim == 1 ? 256 : 64);
        const SampledField f = oracle::random_smooth(g, rng);
        for (double a : {0.3, 0.5, 0.75, 1.0}) {
            const SampledField u = heat_semigroup(f, 0.4, a);
            CHECK(std::abs(u.mean() - f.mean()) <= 1e-12 * std::max(1.0, f.max_abs()));
            CHECK(max_diff(heat_semigroup(heat_semigroup(f, 0.15, a), 0.25, a), u) <= 1e-10);
            CHECK(u.max_abs() <= f.max_abs() + 1e-9);
            double n0 = 0.0, n1 = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) n0 += f[i] * f[i], n1 += u[i] * u[i];
            CHECK(n1 <= n0);
        }
    }
}

TEST_CASE("positivity preserved for a resolved bump") {
    const Grid g = make_grid(1, 32.0, 512);
    const SampledField bump = sample(g, [](const Point& x) { return std::exp(-x[0] * x[0]); });
    for (double a : {0.3, 0.5, 0.75, 1.0}) {
        const SampledField u = heat_semigroup(bump, 0.5, a);
        CHECK(u.min() >= -1e-9 * bump.max_abs());
    }
}

TEST_CASE("boundary decay") {
    const Grid g = make_grid(1, 64.0, 512);
    CHECK(boundary_decay(SampledField(g)) == 0.0);
    const SampledField gauss = sample(g, [](const Point& x) { return std::exp(-x[0] * x[0]); });
    CHECK(boundary_decay(gauss) <= 1e-100);
    const SampledField one = sample(g, [](const Point&) { return 1.0; });
    CHECK(boundary_decay(one) == 1.0);
}
