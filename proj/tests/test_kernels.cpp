#include "fracdt/kernel_cache.hpp"
#include "fracdt/kernels.hpp"
#include "fracdt/stats.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fracdt;

namespace {

double peak_abs(const SampledField& f) { return f.max_abs(); }

// Largest |a - b| / |b| over nodes where |b| >= floor.
double max_rel_where(const SampledField& a, const std::vector<double>& b, double floor) {
    double worst = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (std::abs(b[i]) >= floor) worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
    return worst;
}

// Time derivative of the heat kernel on the line, summed over images.
double gauss_dt_periodic(double t, double x, double L) {
    double s = 0.0;
    for (int k = -20; k <= 20; ++k) {
        const double u = x + k * L;
        s += std::exp(-u * u / (4.0 * t)) * (u * u / (4.0 * t * t) - 0.5 / t);
    }
    return s / std::sqrt(4.0 * oracle::pi * t);
}

// x-derivative of the periodic 1D Poisson kernel sinh(a) / (L (cosh a - cos b)).
double poisson_dx_periodic(double t, double x, double L) {
    const double a = 2.0 * oracle::pi * t / L, b = 2.0 * oracle::pi * x / L;
    const double d = std::cosh(a) - std::cos(b);
    return -std::sinh(a) * std::sin(b) * (2.0 * oracle::pi / L) / (L * d * d);
}

double grid_sum(const SampledField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * f.grid.cell();
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("closed forms") {
    CHECK(kernel_closed_form({1.0, 1, 1.0 / (4.0 * oracle::pi)}, Point{0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kernel_closed_form({0.5, 1, 1.0}, Point{0.0, 0.0}) == doctest::Approx(0.31830988618).epsilon(1e-11));
    CHECK(kernel_closed_form({0.5, 2, 1.0}, Point{0.0, 0.0}) == doctest::Approx(1.0 / (2.0 * oracle::pi)).epsilon(1e-15));
    CHECK(kernel_closed_form({1.0, 1, 0.3}, Point{1e3, 0.0}) <= 1e-300);
    CHECK(kernel_closed_form({1.0, 2, 0.5}, Point{1.0, 2.0}) ==
          doctest::Approx(std::exp(-5.0 / 2.0) / (2.0 * oracle::pi)).epsilon(1e-14));
    CHECK_THROWS_AS(kernel_closed_form({0.75, 1, 1.0}, Point{0.0, 0.0}), Error);
    CHECK_THROWS_AS(validate(KernelSpec{0.0, 1, 1.0}), Error);
    CHECK_THROWS_AS(validate(KernelSpec{0.5, 1, -1.0}), Error);
    CHECK_THROWS_AS(validate(KernelSpec{0.5, 3, 1.0}), Error);
}

TEST_CASE("Poisson kernel on the line against the periodic closed form") {
    const Grid g = make_grid(1, 256.0, 1u << 14);
    const SampledField k = kernel_numeric({0.5, 1, 1.0}, g);
    std::vector<double> ref(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) ref[i] = oracle::poisson_1d_periodic(1.0, g.coordinate(i), 256.0);
    CHECK(max_rel_where(k, ref, 1e-8 * peak_abs(k)) <= 1e-6);
    CHECK(k[g.origin()] == doctest::Approx(1.0 / oracle::pi).epsilon(1e-4));
}

TEST_CASE("Gaussian kernel in the plane against the image sum") {
    const Grid g = make_grid(2, 16.0, 128);
    const SampledField k = kernel_numeric({1.0, 2, 0.5}, g);
    std::vector<double> ref(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Point x = g.node(i);
        ref[i] = oracle::gauss_periodic(0.5, x[0], 16.0, 2, x[1]);
    }
    CHECK(max_rel_where(k, ref, 1e-8 * peak_abs(k)) <= 1e-6);
}

TEST_CASE("Poisson kernel in the plane against the lattice sum") {
    const double L = 64.0, t = 1.0;
    const Grid g = make_grid(2, L, 512);
    const SampledField k = kernel_numeric({0.5, 2, t}, g);
    const double floor = 1e-8 * peak_abs(k);
    double worst = 0.0;
    int checked = 0;
    for (std::size_t a = 0; a < g.points; a += 23) {
        for (std::size_t b : {a, g.points / 2, (a * 7 + 5) % g.points}) {
            const std::size_t i = a * g.points + b;
            const Point x = g.node(i);
            const double ref = oracle::poisson_2d_periodic(t, x[0], x[1], L);
            if (std::abs(ref) < floor) continue;
            worst = std::max(worst, std::abs(k[i] - ref) / std::abs(ref));
            ++checked;
        }
    }
    CHECK(checked > 50);
    CHECK(worst <= 1e-6);
}

TEST_CASE("mass and derivatives") {
    SUBCASE("unit mass") {
        for (double a : {0.3, 0.5, 0.75, 1.0}) {
            const Grid g = make_grid(1, 64.0, 1024);
            CHECK(std::abs(grid_sum(kernel_numeric({a, 1, 1.0}, g, {1.0, 1.0})) - 1.0) <= 1e-8);
        }
        const Grid g = self_similar_grid(0.75, 1, 1.0, 4096, 16);
        CHECK(std::abs(grid_sum(kernel_numeric({0.75, 1, 1.0}, g)) - 1.0) <= 1e-8);
    }
    SUBCASE("time derivative of the Gaussian") {
        const double t = 0.7, L = 32.0;
        const Grid g = make_grid(1, L, 512);
        const SampledField dk = kernel_time_derivative({1.0, 1, t}, g);
        std::vector<double> ref(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) ref[i] = gauss_dt_periodic(t, g.coordinate(i), L);
        CHECK(max_rel_where(dk, ref, 1e-8 * peak_abs(dk)) <= 1e-6);
        CHECK(std::abs(grid_sum(dk)) <= 1e-8);
    }
    SUBCASE("time derivative has zero mass") {
        for (double a : {0.5, 0.75}) {
            const Grid g = self_similar_grid(a, 1, 2.0, 4096, 16);
            CHECK(std::abs(grid_sum(kernel_time_derivative({a, 1, 2.0}, g))) <= 1e-8);
        }
    }
    SUBCASE("gradient of the Poisson kernel") {
        const double t = 1.0, L = 256.0;
        const Grid g = make_grid(1, L, 1u << 14);
        const auto grad = kernel_gradient({0.5, 1, t}, g);
        REQUIRE(grad.size() == 1);
        std::vector<double> ref(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) ref[i] = poisson_dx_periodic(t, g.coordinate(i), L);
        CHECK(max_rel_where(grad[0], ref, 1e-8 * peak_abs(grad[0])) <= 1e-6);
    }
    SUBCASE("planar gradient components are real and odd") {
        const Grid g = make_grid(2, 16.0, 128);
        const auto grad = kernel_gradient({1.0, 2, 0.5}, g);
        REQUIRE(grad.size() == 2);
        const Point x{1.0, -0.5};
        const double ref = -x[0] / (2.0 * 0.5) * oracle::gauss_periodic(0.5, x[0], 16.0, 2, x[1]);
        const std::size_t i = (g.origin() / g.points + 8) * g.points + (g.origin() % g.points - 4);
        CHECK(g.node(i)[0] == 1.0);
        CHECK(g.node(i)[1] == -0.5);
        CHECK(grad[0][i] == doctest::Approx(ref).epsilon(1e-8));
        CHECK(magnitude(grad)[g.origin()] <= 1e-12);
    }
}

TEST_CASE("bound (i) for the Poisson kernel") {
    const auto reps = check_kernel_bounds_scaled(0.5, 1, {0.01, 0.1, 1.0, 10.0}, 16384, 32);
    const BoundReport& r = reps[0];
    CHECK(r.bound_id == BoundId::size_i);
    CHECK(r.sup_ratio == doctest::Approx(2.0 / oracle::pi).epsilon(1e-4));
    CHECK(std::abs(std::abs(r.argmax_x[0]) - r.argmax_parameter) <= 0.05 * r.argmax_parameter);
    CHECK(r.spread <= 1.0 + 1e-6);
    REQUIRE(r.min_relative.has_value());
    CHECK(*r.min_relative > -1e-10);
    for (const auto& b : reps) {
        CHECK(std::isfinite(b.sup_ratio));
        CHECK(b.stable);
    }
}

TEST_CASE("bound reports across alpha") {
    for (double a : {0.5, 0.75, 1.0}) {
        CAPTURE(a);
        const auto reps = check_kernel_bounds_scaled(a, 1, geometric_sweep(0.01, 10.0, 4), 4096, 16);
        for (const auto& b : reps) {
            CHECK(std::isfinite(b.sup_ratio));
            CHECK(b.sup_ratio > 0.0);
            CHECK(b.stable);
            CHECK(b.sweep.size() == 4);
        }
    }
}

TEST_CASE("self-similarity") {
    const KernelTolerances loose{1e-1, 1e-2};
    for (double a : {0.3, 0.5, 0.75, 1.0}) {
        CAPTURE(a);
        const SampledField k1 = kernel_numeric({a, 1, 1.0}, self_similar_grid(a, 1, 1.0, 2048, 16), loose);
        for (double t : {0.01, 3.0}) {
            const SampledField kt = kernel_numeric({a, 1, t}, self_similar_grid(a, 1, t, 2048, 16), loose);
            std::vector<double> ref(k1.values);
            const double scale = std::pow(t, -1.0 / (2.0 * a));
            for (double& v : ref) v *= scale;
            CHECK(max_rel_where(kt, ref, 1e-8 * peak_abs(kt)) <= 1e-6);
        }
    }
    const SampledField k1 = kernel_numeric({0.75, 2, 1.0}, self_similar_grid(0.75, 2, 1.0, 256, 4), loose);
    const SampledField kt = kernel_numeric({0.75, 2, 5.0}, self_similar_grid(0.75, 2, 5.0, 256, 4), loose);
    std::vector<double> ref(k1.values);
    for (double& v : ref) v *= std::pow(5.0, -2.0 / 1.5);
    CHECK(max_rel_where(kt, ref, 1e-8 * peak_abs(kt)) <= 1e-6);
}

TEST_CASE("positivity and radial monotonicity") {
    struct Case {
        double alpha;
        std::size_t points;
        double pps;
    };
    for (const Case c : {Case{0.3, 65536, 128}, Case{0.5, 16384, 32}, Case{0.75, 4096, 16}, Case{1.0, 1024, 16}}) {
        CAPTURE(c.alpha);
        const Grid g = self_similar_grid(c.alpha, 1, 1.0, c.points, c.pps);
        const SampledField k = kernel_numeric({c.alpha, 1, 1.0}, g);
        const double peak = peak_abs(k);
        CHECK(k.min() > -1e-10 * peak);
        double worst = 0.0;
        for (std::size_t i = g.origin(); i + 1 < g.size(); ++i) worst = std::max(worst, k[i + 1] - k[i]);
        for (std::size_t i = g.origin(); i > 0; --i) worst = std::max(worst, k[i - 1] - k[i]);
        CHECK(worst <= 1e-9 * peak);
    }
    const Grid g2 = self_similar_grid(0.5, 2, 1.0, 1024, 16);
    const SampledField k2 = kernel_numeric({0.5, 2, 1.0}, g2);
    CHECK(k2.min() > -1e-10 * peak_abs(k2));
    const std::size_t row = g2.origin() / g2.points * g2.points;
    double worst = 0.0;
    for (std::size_t j = g2.points / 2; j + 1 < g2.points; ++j) worst = std::max(worst, k2[row + j + 1] - k2[row + j]);
    CHECK(worst <= 1e-9 * peak_abs(k2));
}

TEST_CASE("grid diagnostics") {
    SUBCASE("too short a box") {
        const Grid g = make_grid(1, 8.0, 1024);
        CHECK_FALSE(diagnose({0.5, 1, 1.0}, g).passed);
        CHECK_THROWS_AS(kernel_numeric({0.5, 1, 1.0}, g), PeriodizationError);
        CHECK_THROWS_AS(kernel_time_derivative({0.5, 1, 1.0}, g), PeriodizationError);
        CHECK_THROWS_AS(kernel_gradient({0.5, 1, 1.0}, g), PeriodizationError);
    }
    SUBCASE("too coarse a mesh") {
        const Grid g = make_grid(1, 256.0, 64);
        const GridDiagnostic d = diagnose({0.5, 1, 1.0}, g);
        CHECK_FALSE(d.passed);
        CHECK(d.resolution > 1e-10);
        CHECK_THROWS_AS(kernel_numeric({0.5, 1, 1.0}, g), PeriodizationError);
    }
    SUBCASE("a good grid passes") {
        const GridDiagnostic d = diagnose({0.5, 1, 1.0}, make_grid(1, 256.0, 1u << 14));
        CHECK(d.passed);
        CHECK(d.periodization <= 1e-3);
        CHECK(d.resolution <= 1e-10);
    }
}

TEST_CASE("kernel cache") {
    const auto dir = std::filesystem::temp_directory_path() / "fracdt_test_kernel_cache";
    std::filesystem::remove_all(dir);
    const KernelCache cache(dir);
    const KernelSpec spec{0.75, 1, 1.0};
    const Grid g = self_similar_grid(0.75, 1, 1.0, 1024, 16);
    const SampledField direct = kernel_numeric(spec, g, {1e-1, 1e-3});

    CHECK_FALSE(cache.load("kernel", spec, g).has_value());
    const SampledField first = kernel_numeric(spec, g, {1e-1, 1e-3}, &cache);
    const auto path = cache.path_for("kernel", spec, g);
    REQUIRE(std::filesystem::exists(path));
    CHECK(max_diff(first, direct) == 0.0);

    const auto loaded = cache.load("kernel", spec, g);
    REQUIRE(loaded.has_value());
    CHECK(max_diff(*loaded, direct) <= 1e-15 * peak_abs(direct));
    CHECK(max_diff(kernel_numeric(spec, g, {1e-1, 1e-3}, &cache), direct) <= 1e-15 * peak_abs(direct));

    const std::string before = slurp(path);
    cache.store("kernel", spec, 2.0 * direct);
    CHECK(slurp(path) == before);

    CHECK(cache.path_for("kernel", {0.5, 1, 1.0}, g) != path);
    CHECK(cache.path_for("dt", spec, g) != path);

    setenv("FRACDT_CACHE_DIR", dir.c_str(), 1);
    const auto env = KernelCache::from_env();
    REQUIRE(env.has_value());
    CHECK(env->dir() == dir);
    setenv("FRACDT_CACHE_DIR", "", 1);
    CHECK_FALSE(KernelCache::from_env().has_value());
    unsetenv("FRACDT_CACHE_DIR");
    std::filesystem::remove_all(dir);
}
