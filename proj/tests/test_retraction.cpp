#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lipfree/retraction.hpp"
#include "oracles.hpp"

using namespace lipfree;

namespace {

CubeComplex random_complex(Rng& rng, std::size_t d, double R) {
    std::vector<IntVec> cubes{IntVec(d, 0)};
    const std::size_t n = 1 + uniform_index(rng, 4);
    while (cubes.size() < n) {
        IntVec w = cubes[uniform_index(rng, cubes.size())];
        w[uniform_index(rng, d)] += uniform_index(rng, 2) ? 1 : -1;
        if (std::find(cubes.begin(), cubes.end(), w) == cubes.end()) cubes.push_back(w);
    }
    return CubeComplex(d, R, cubes, IntVec(d, 0));
}

double pw(double base, double e) { return std::pow(base, e); }

}  // namespace

TEST_CASE("retract values") {
    RetractionContext line(unit_cube_complex(1), PExponent(1.0));
    const auto r = retract(line, {0.3});
    CHECK(r.weight(1) == doctest::Approx(0.3));
    CHECK(r.weights().size() == 1);
    CHECK(retract(line, {1.0}).max_abs_diff(FreeElement::delta(line.vertex_space(), 1)) == 0.0);

    RetractionContext sq(unit_cube_complex(2), PExponent(0.5));
    const auto mu = retract_measure(sq, {0.5, 0.5});
    REQUIRE(mu.size() == 4);
    for (const auto& [v, w] : mu) CHECK(w == doctest::Approx(0.25));
    CHECK_THROWS(retract(sq, {1.5, 0.5}));
}

TEST_CASE("translation covariance") {
    RetractionContext ctx(CubeComplex(2, 1.0, {{0, 0}, {1, 0}}, {0, 0}), PExponent(0.5));
    const RealVec x{0.3, 0.6};
    const auto mu = retract_measure(ctx, x);
    CHECK(translate_element(ctx, mu, {0, 0}).max_abs_diff(measure_to_element(ctx, mu)) < 1e-15);
    CHECK(translate_element(ctx, mu, {1, 0}).max_abs_diff(retract(ctx, {1.3, 0.6})) < 1e-12);
    CHECK_THROWS(translate_element(ctx, mu, {0.5, 0}));
    CHECK_THROWS(translate_element(ctx, mu, {0, 1}));
}

TEST_CASE("rescaling") {
    auto small = l1_space({{0}, {1}}, 0);
    auto [lhs, rhs] = rescale_check(FreeElement::delta(small, 1), 2.0, {0}, PExponent(0.5));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(lhs == doctest::Approx(2.0));
    std::tie(lhs, rhs) = rescale_check(FreeElement::delta(small, 1), 1.0, {0}, PExponent(0.5));
    CHECK(lhs == rhs);
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        auto sq = l1_space({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, 0);
        FreeElement m(sq);
        for (std::size_t i = 1; i < 4; ++i) m.add(i, 2 * uniform01(rng) - 1);
        std::tie(lhs, rhs) = rescale_check(m, 3.0, {1, -2}, PExponent(0.5));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("upper decomposition: same cube, one coordinate") {
    for (std::size_t d = 1; d <= 3; ++d) {
        for (double p : {1.0, 0.5}) {
            RetractionContext ctx(unit_cube_complex(d), PExponent(p));
            RealVec x(d, 0.37), y(d, 0.37);
            x[d - 1] = 0.1;
            y[d - 1] = 0.85;
            const auto dec = lipschitz_upper_decomposition(ctx, x, y);
            CHECK(dec.terms.size() <= (std::size_t{1} << (d - 1)));
            CHECK(p_cost(dec, PExponent(p)) <= pw(std::ldexp(1.0, static_cast<int>(d) - 1), 1 / p - 1) * 0.75 * (1 + 1e-9));
            CHECK(evaluate(dec).max_abs_diff(retract(ctx, x) - retract(ctx, y)) < 1e-12);
        }
    }
    RetractionContext ctx(unit_cube_complex(2), PExponent(0.5));
    CHECK(lipschitz_upper_decomposition(ctx, {0.2, 0.2}, {0.2, 0.2}).terms.empty());
}

TEST_CASE("upper decomposition: random pairs in random complexes") {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = 1 + uniform_index(rng, 3);
        const double R = 0.5 + uniform01(rng);
        const double p = trial % 2 ? 1.0 : 0.5;
        RetractionContext ctx(random_complex(rng, d, R), PExponent(p));
        const std::vector<IntVec> cubes(ctx.complex().offsets().begin(), ctx.complex().offsets().end());
        const double C = pw(std::ldexp(1.0, static_cast<int>(d) - 1), 1 / p - 1) * pw(static_cast<double>(d), 1 / p - 1) * pw(3.0, 1 / p - 1);
        for (int s = 0; s < 30; ++s) {
            const auto x = sample_in_cube(R, cubes[uniform_index(rng, cubes.size())], rng, 0.1);
            const auto y = sample_in_cube(R, cubes[uniform_index(rng, cubes.size())], rng, 0.1);
            const auto dec = lipschitz_upper_decomposition(ctx, x, y);
            double dist = 0.0;
            for (std::size_t i = 0; i < d; ++i) dist += std::abs(x[i] - y[i]);
            CHECK(p_cost(dec, PExponent(p)) <= C * dist * (1 + 1e-9) + 1e-15);
            CHECK(evaluate(dec).max_abs_diff(retract(ctx, x) - retract(ctx, y)) < 1e-9);
        }
    }
}

TEST_CASE("cross-cube pair, d = 2, p = 1/2") {
    RetractionContext ctx(CubeComplex(2, 1.0, {{0, 0}, {1, 0}}, {0, 0}), PExponent(0.5));
    const RealVec x{0.2, 0.9}, y{1.7, 0.1};
    const auto dec = lipschitz_upper_decomposition(ctx, x, y);
    CHECK(p_cost(dec, PExponent(0.5)) <= 12 * 2.3 * (1 + 1e-9));
    CHECK(evaluate(dec).max_abs_diff(retract(ctx, x) - retract(ctx, y)) < 1e-12);
}

TEST_CASE("lower bound witness") {
    for (std::size_t d = 1; d <= 3; ++d) {
        for (double p : {1.0, 0.75, 0.5}) {
            const auto w = lower_bound_witness(d, PExponent(p));
            const double expect = pw(std::ldexp(1.0, static_cast<int>(d) - 1), 1 / p - 1);
            CHECK(w.certified_value == doctest::Approx(expect).epsilon(1e-12));
            CHECK(upper_bound_from(w.element, PExponent(p), w.upper) == doctest::Approx(expect).epsilon(1e-12));
            double dist = 0.0;
            for (std::size_t i = 0; i < d; ++i) dist += std::abs(w.x[i] - w.y[i]);
            CHECK(dist == doctest::Approx(1.0));
            // element = sum over the top face minus the bottom face, weights 2^{-d+1}
            for (const auto& [i, wt] : w.element.weights()) CHECK(std::abs(wt) == doctest::Approx(std::ldexp(1.0, 1 - static_cast<int>(d))));
        }
    }
    const auto w3 = lower_bound_witness(3, PExponent(0.5));
    CHECK(exact_norm_small(w3.element, PExponent(0.5)).value == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("witness in a shifted cube of a larger complex") {
    RetractionContext ctx(CubeComplex(2, 2.0, {{0, 0}, {1, 0}, {1, 1}}, {0, 0}), PExponent(0.5));
    const auto w = witness_certificate(ctx, {1, 1});
    CHECK(w.certified_value / 2.0 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(upper_bound_from(w.element, PExponent(0.5), w.upper) == doctest::Approx(w.certified_value).epsilon(1e-12));
}

TEST_CASE("lipschitz estimate") {
    for (double p : {1.0, 0.5}) {
        RetractionContext ctx(CubeComplex(1, 1.0, {{0}, {1}}, {0}), PExponent(p));
        SamplerConfig cfg;
        cfg.n_samples = 300;
        cfg.seed = 4;
        const auto r = estimate_lipschitz(ctx, cfg);
        CHECK(r.passed());
        CHECK(r.max_upper_cost_ratio <= pw(3.0, 1 / p - 1) * (1 + 1e-9));
        CHECK(r.witness_value == doctest::Approx(1.0));
    }
    RetractionContext line(unit_cube_complex(1), PExponent(1.0));
    SamplerConfig cfg;
    cfg.n_samples = 200;
    const auto r = estimate_lipschitz(line, cfg);
    CHECK(r.max_upper_cost_ratio <= 1 + 1e-9);

    RetractionContext sq(unit_cube_complex(2), PExponent(0.5));
    const auto a = estimate_lipschitz(sq, cfg);
    const auto b = estimate_lipschitz(sq, cfg);
    CHECK(a.max_lower_ratio == b.max_lower_ratio);
    CHECK(a.max_upper_cost_ratio == b.max_upper_cost_ratio);
    CHECK(a.witness_value == doctest::Approx(2.0).epsilon(1e-9));
}
