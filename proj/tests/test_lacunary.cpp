#include "fracdt/lacunary.hpp"
#include "fracdt/transforms.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace fracdt;

namespace {

std::vector<double> powers_of(double lambda, int lo, int hi) {
    std::vector<double> out;
    for (int j = lo; j <= hi; ++j) out.push_back(std::pow(lambda, j));
    return out;
}

void check_refinement_invariants(const LacunarySequence& a, const WeightSequence& v, const RefinementResult& r) {
    const double lam = a.lambda();
    const auto& eta = r.eta.terms();
    for (std::size_t k = 0; k + 1 < eta.size(); ++k) {
        const double q = eta[k + 1] / eta[k];
        CHECK(q >= lam * (1.0 - 1e-12));
        CHECK(q <= lam * lam * (1.0 + 1e-12));
    }
    for (long j = a.j_min(); j <= a.j_max(); ++j) CHECK(r.eta.at(r.refined_index(j)) == a.at(j));
    CHECK(r.omega.norm_linf() == v.norm_linf());
    CHECK(r.omega.aligned_with(r.eta));
    for (long j = a.j_min(); j < a.j_max(); ++j) {
        const auto [first, last] = r.block(j);
        CHECK(first == r.refined_index(j));
        CHECK(last == r.refined_index(j + 1) - 1);
        for (long k = first; k <= last; ++k) CHECK(r.omega.at(k) == v.at(j));
    }
}

}  // namespace

TEST_CASE("validate_lacunary") {
    const LacunarySequence s = validate_lacunary(powers_of(2.0, -5, 5), 2.0, -5);
    CHECK(s.size() == 11);
    CHECK(s.j_min() == -5);
    CHECK(s.j_max() == 5);
    CHECK(s.at(0) == 1.0);
    CHECK(s.min_ratio() == 2.0);
    CHECK_THROWS_AS(s.at(6), std::out_of_range);

    CHECK_THROWS_WITH_AS(validate_lacunary({1.0, 1.5}, 2.0), doctest::Contains("j=0"), Error);
    const LacunarySequence t = validate_lacunary({1.0, 3.0, 9.5}, 3.0);
    CHECK(t.max_ratio() == doctest::Approx(9.5 / 3.0));
    CHECK_THROWS_AS(validate_lacunary({}, 2.0), Error);
    CHECK_THROWS_AS(validate_lacunary({1.0, 0.5}, 2.0), Error);
    CHECK_THROWS_AS(validate_lacunary({-1.0, 2.0}, 2.0), Error);
    CHECK_THROWS_AS(validate_lacunary({1.0, 2.0}, 1.0), Error);
    CHECK_NOTHROW(LacunarySequence::increasing({1.0, 1.1, 1.2}));
    CHECK_THROWS_AS(LacunarySequence::increasing({1.0, 1.0}), Error);
}

TEST_CASE("generated sequences") {
    const LacunarySequence g = geometric_sequence(1.5, -3, 4, 0.5);
    CHECK(g.size() == 8);
    CHECK(g.at(0) == 0.5);
    CHECK(g.at(2) == doctest::Approx(0.5 * 2.25).epsilon(1e-15));
    CHECK(g.lambda() == 1.5);

    const LacunarySequence p = perturbed_geometric_sequence(3.0, -4, 4);
    for (long j = -4; j <= 4; ++j) CHECK(p.at(j) == doctest::Approx(std::pow(3.0, j) * (1.0 + 0.3 * std::sin(j))));
    CHECK(p.lambda() > 1.0);
    CHECK(p.min_ratio() >= p.lambda());
}

TEST_CASE("weights") {
    const WeightSequence w({1.0, -3.0, 2.0}, -1);
    CHECK(w.j_max() == 1);
    CHECK(w.at(0) == -3.0);
    CHECK(w.norm_linf() == 3.0);
    CHECK(w.norm_lp(2.0) == doctest::Approx(std::sqrt(14.0)));
    CHECK(w.norm_lp(1.0) == 6.0);
    CHECK(w.aligned_with(geometric_sequence(2.0, -1, 1)));
    CHECK_FALSE(w.aligned_with(geometric_sequence(2.0, 0, 2)));
    CHECK_THROWS_AS(w.at(2), std::out_of_range);
    CHECK_THROWS_AS(WeightSequence({1.0, NAN}), Error);
}

TEST_CASE("refine worked examples") {
    SUBCASE("one wide gap") {
        const LacunarySequence a = validate_lacunary({1.0, 10.0}, 2.0);
        const WeightSequence v({0.7, -0.2});
        const RefinementResult r = refine(a, v);
        CHECK(r.eta.terms() == std::vector<double>{1.0, 2.0, 4.0, 10.0});
        CHECK(r.omega.values() == std::vector<double>{0.7, 0.7, 0.7, -0.2});
        CHECK(r.block(0) == std::pair<long, long>{0, 2});
        check_refinement_invariants(a, v, r);
    }
    SUBCASE("already within [lambda, lambda^2]") {
        const LacunarySequence a = validate_lacunary({1.0, 3.0, 9.5, 20.0}, 2.0, -1);
        const WeightSequence v({1.0, -2.0, 0.5, 4.0}, -1);
        const RefinementResult r = refine(a, v);
        CHECK(r.eta.terms() == a.terms());
        CHECK(r.eta.j_min() == a.j_min());
        for (long j = -1; j < 2; ++j) CHECK(r.block(j) == std::pair<long, long>{j, j});
        CHECK(r.window_map(-1, 1) == std::pair<long, long>{-1, 1});
        check_refinement_invariants(a, v, r);
    }
    SUBCASE("a long gap is bridged until lambda^2 reaches the next term") {
        const LacunarySequence a = validate_lacunary({1.0, 2.0, 4.0, 64.0}, 2.0);
        const WeightSequence v({1.0, 2.0, 3.0, 4.0});
        const RefinementResult r = refine(a, v);
        CHECK(r.eta.terms() == std::vector<double>{1.0, 2.0, 4.0, 8.0, 16.0, 64.0});
        CHECK(r.omega.values() == std::vector<double>{1.0, 2.0, 3.0, 3.0, 3.0, 4.0});
        CHECK(r.block(2) == std::pair<long, long>{2, 4});
        CHECK(r.window_map(1, 2) == std::pair<long, long>{1, 4});
        check_refinement_invariants(a, v, r);
    }
    SUBCASE("anchor at index 0") {
        const LacunarySequence a = validate_lacunary({0.1, 1.0, 100.0}, 3.0, -1);
        const WeightSequence v({1.0, 1.0, 1.0}, -1);
        const RefinementResult r = refine(a, v);
        CHECK(r.eta.at(0) == 1.0);
        check_refinement_invariants(a, v, r);
    }
}

TEST_CASE("refine invariants on random sequences") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double lam = 1.2 + 1.8 * u(rng);
        const long j_min = -static_cast<long>(u(rng) * 5);
        const int len = 3 + static_cast<int>(u(rng) * 10);
        std::vector<double> a{std::exp(u(rng) - 0.5)}, v;
        for (int k = 1; k < len; ++k) a.push_back(a.back() * lam * std::pow(20.0, u(rng)));
        for (int k = 0; k < len; ++k) v.push_back(4.0 * u(rng) - 2.0);
        const LacunarySequence seq = validate_lacunary(a, lam, j_min);
        const WeightSequence w(v, j_min);
        CAPTURE(trial);
        check_refinement_invariants(seq, w, refine(seq, w));
    }
}

TEST_CASE("refinement leaves every window unchanged") {
    const Grid g = make_grid(1, 64.0, 256);
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SUBCASE("constant weights") {
        const LacunarySequence a = validate_lacunary({0.5, 1.0, 10.0, 300.0}, 2.0);
        const WeightSequence v({1.0, 1.0, 1.0, 1.0});
        const SampledField f = oracle::random_smooth(g, rng);
        const TransformSpec spec(0.5, a, v);
        CHECK(transform_equivalence_check(f, spec, {0, 2}, refine(a, v)) <= 1e-12);
    }
    SUBCASE("hand-built example against the symbol on a single mode") {
        const LacunarySequence a = validate_lacunary({1.0, 10.0, 100.0}, 2.0);
        const WeightSequence v({0.3, -1.7, 2.0});
        const RefinementResult r = refine(a, v);
        const double xi = 2.0 * oracle::pi * 3.0 / 64.0, alpha = 0.75;
        const SampledField mode = sample(g, [&](const Point& x) { return std::cos(xi * x[0]); });
        const double p = std::pow(xi, 2.0 * alpha);
        double sym = 0.0;
        for (long k = r.eta.j_min(); k < r.eta.j_max(); ++k)
            sym += r.omega.at(k) * (std::exp(-r.eta.at(k + 1) * p) - std::exp(-r.eta.at(k) * p));
        const TransformSpec spec(alpha, a, v);
        const SampledField out = differential_transform(mode, spec, {0, 1});
        CHECK(max_diff(out, sym * mode) <= 1e-12);
        CHECK(transform_equivalence_check(mode, spec, {0, 1}, r) <= 1e-12);
        CHECK(transform_equivalence_check(mode, spec, {1, 1}, r) <= 1e-12);
    }
    SUBCASE("random trials") {
        for (int trial = 0; trial < 100; ++trial) {
            const double lam = 1.2 + 1.8 * u(rng);
            const int len = 3 + static_cast<int>(u(rng) * 10);
            std::vector<double> a{0.05 + u(rng)}, v;
            for (int k = 1; k < len; ++k) a.push_back(a.back() * lam * std::pow(20.0, u(rng)));
            for (int k = 0; k < len; ++k) v.push_back(4.0 * u(rng) - 2.0);
            const LacunarySequence seq = validate_lacunary(a, lam);
            const WeightSequence w(v);
            const TransformSpec spec(0.25 + 0.75 * u(rng), seq, w);
            const long n1 = static_cast<long>(u(rng) * (len - 1));
            const long n2 = n1 + static_cast<long>(u(rng) * (len - 1 - n1));
            const SampledField f = oracle::random_smooth(g, rng);
            CAPTURE(trial);
            CHECK(transform_equivalence_check(f, spec, {n1, n2}, refine(seq, w)) <= 1e-10);
        }
    }
    SUBCASE("window outside the sequence") {
        const LacunarySequence a = validate_lacunary({1.0, 10.0, 100.0}, 2.0);
        const WeightSequence v({1.0, 1.0, 1.0});
        const TransformSpec spec(0.5, a, v);
        CHECK_THROWS_AS(transform_equivalence_check(SampledField(g), spec, {0, 2}, refine(a, v)), std::out_of_range);
    }
}
