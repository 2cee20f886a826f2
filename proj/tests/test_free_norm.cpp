#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lipfree/free_norm.hpp"
#include "oracles.hpp"

using namespace lipfree;

namespace {

MetricPtr three_point() { return std::make_shared<PointedFiniteMetric>(std::vector<std::vector<double>>{{0, 1, 2}, {1, 0, 1.2}, {2, 1.2, 0}}, 0); }

MetricPtr random_space(Rng& rng, std::size_t n, std::size_t dim) {
    std::vector<RealVec> pts;
    for (std::size_t i = 0; i < n; ++i) {
        RealVec x(dim);
        for (auto& c : x) c = std::round(uniform01(rng) * 64) / 16;
        if (std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(x);
    }
    return l1_space(pts, uniform_index(rng, pts.size()));
}

std::vector<double> random_weights(Rng& rng, std::size_t n) {
    std::vector<double> w(n);
    for (auto& x : w) x = uniform01(rng) < 0.3 ? 0.0 : 4 * uniform01(rng) - 2;
    return w;
}

FreeElement element(const MetricPtr& host, const std::vector<double>& w) {
    FreeElement m(host);
    for (std::size_t i = 0; i < w.size(); ++i) m.add(i, w[i]);
    return m;
}

}  // namespace

TEST_CASE("free element arithmetic") {
    auto h = three_point();
    auto a = FreeElement::delta(h, 1);
    CHECK(a.weight(1) == 1.0);
    CHECK(FreeElement::delta(h, 0).is_zero());
    auto b = a - a;
    CHECK(b.is_zero());
    auto c = FreeElement::difference(h, 1, 2) * 2.0;
    CHECK(c.weight(2) == -2.0);
    auto other = three_point();
    CHECK_THROWS(a + FreeElement::delta(other, 1));
}

TEST_CASE("evaluate and p_cost") {
    auto h = three_point();
    Decomposition e{h, {}};
    CHECK(evaluate(e).is_zero());
    Decomposition one{h, {{1.2, {1, 2}}}};
    CHECK(evaluate(one).max_abs_diff(FreeElement::difference(h, 1, 2)) < 1e-15);
    Decomposition cancel{h, {{0.7, {1, 2}}, {-0.7, {1, 2}}}};
    CHECK(evaluate(cancel).is_zero());
    CHECK(p_cost(std::vector<double>{1.0}, PExponent(1.0)) == 1.0);
    CHECK(p_cost(std::vector<double>{0.5, 0.5}, PExponent(0.5)) == doctest::Approx(2.0));
    CHECK(p_cost(std::vector<double>{3, 4}, PExponent(1.0)) == 7.0);
}

TEST_CASE("p = 1 norm examples") {
    auto h = three_point();
    CHECK(exact_norm_p1(FreeElement::delta(h, 2)).value == doctest::Approx(2.0));
    CHECK(exact_norm_p1(FreeElement::difference(h, 1, 2)).value == doctest::Approx(1.2));
    FreeElement m(h, {{1, 1.0}, {2, 1.0}});
    CHECK(exact_norm_p1(m).value == doctest::Approx(3.0));
    CHECK(exact_norm_p1(FreeElement(h)).value == 0.0);
}

TEST_CASE("exact norms agree with the spanning-tree oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + uniform_index(rng, 5);
        auto h = random_space(rng, n, 2);
        const auto w = random_weights(rng, h->size());
        const auto m = element(h, w);
        const double o1 = oracle::tree_norm(h->matrix(), h->base(), w, 1.0);
        const auto r1 = exact_norm_p1(m);
        CHECK(r1.value == doctest::Approx(o1).epsilon(1e-9));
        CHECK(upper_bound_from(m, PExponent(1.0), r1.witness) == doctest::Approx(r1.value).epsilon(1e-9));
        for (double p : {0.5, 0.8}) {
            const auto rp = exact_norm_small(m, PExponent(p));
            CHECK(rp.value == doctest::Approx(oracle::tree_norm(h->matrix(), h->base(), w, p)).epsilon(1e-9));
            CHECK(upper_bound_from(m, PExponent(p), rp.witness) == doctest::Approx(rp.value).epsilon(1e-9));
            // the p-norm dominates the 1-norm
            CHECK(rp.value >= r1.value * (1 - 1e-12));
        }
    }
}

TEST_CASE("exact norm small") {
    auto pair = l1_space({{0}, {3}}, 0);
    CHECK(exact_norm_small(FreeElement::delta(pair, 1), PExponent(0.3)).value == doctest::Approx(3.0));
    CHECK(exact_norm_small(FreeElement::delta(pair, 1) * -2.5, PExponent(0.3)).value == doctest::Approx(7.5));
    // witness element on the unit square, p = 1/2
    auto sq = l1_space({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, 0);
    FreeElement w(sq, {{2, 0.5}, {3, 0.5}, {1, -0.5}});
    CHECK(exact_norm_small(w, PExponent(0.5)).value == doctest::Approx(2.0).epsilon(1e-12));
    std::vector<RealVec> many;
    for (int i = 0; i < 9; ++i) many.push_back({static_cast<double>(i)});
    CHECK_THROWS_AS(exact_norm_small(FreeElement::delta(l1_space(many, 0), 3), PExponent(0.5)), std::length_error);
}

TEST_CASE("restricted norm") {
    auto h = three_point();
    const auto m = FreeElement::difference(h, 1, 2);
    const PExponent p(0.5);
    CHECK(restricted_norm(m, p, {0, 1, 2}).value == doctest::Approx(exact_norm_small(m, p).value));
    // 1 -> 0 -> 2 forbidden when 0 is dropped; direct route only
    const auto m2 = FreeElement::delta(h, 2);
    CHECK(restricted_norm(m2, p, {0, 2}).value >= exact_norm_small(m2, p).value * (1 - 1e-12));
    CHECK(restricted_norm(m, p, {1, 2}).value == doctest::Approx(1.2));
    CHECK(std::isinf(restricted_norm(FreeElement::delta(h, 1), p, {1, 2}).value));
    CHECK_THROWS(restricted_norm(m, p, {1}));
}

TEST_CASE("dual certificate") {
    auto h = l1_space({{0}, {1}, {2}}, 0);
    DualCertificate c;
    c.functions = {{0, 1, 0}};
    c.kappa = 1;
    c.activity = {{{0, 1}, {1, 2}}};
    CHECK(dual_lower_bound(FreeElement::delta(h, 1), PExponent(0.5), c) == doctest::Approx(1.0));
    CHECK(dual_lower_bound(FreeElement(h), PExponent(0.5), c) == 0.0);

    DualCertificate steep = c;
    steep.functions = {{0, 2, 0}};
    CHECK_THROWS_WITH_AS(validate_certificate(*h, steep), doctest::Contains("Lipschitz"), std::invalid_argument);
    DualCertificate base = c;
    base.functions = {{1, 1, 1}};
    CHECK_THROWS_AS(validate_certificate(*h, base), std::invalid_argument);
    DualCertificate inactive = c;
    inactive.activity = {{{0, 1}}};
    CHECK_THROWS_AS(validate_certificate(*h, inactive), std::invalid_argument);
}

TEST_CASE("dual bound never exceeds the norm") {
    // hand-rolled generator of random 1-Lipschitz functions on random spaces
    Rng rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        auto h = random_space(rng, 5, 2);
        const std::size_t n = h->size();
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = h->dist(i, h->base()) * (uniform01(rng) < 0.5 ? -1 : 1);
        f[h->base()] = 0.0;
        double lip = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) lip = std::max(lip, std::abs(f[i] - f[j]) / h->dist(i, j));
        if (lip > 0) for (auto& x : f) x /= lip;
        DualCertificate c;
        c.functions = {f};
        c.activity.emplace_back();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) c.activity[0].insert({i, j});
        const auto w = random_weights(rng, n);
        const auto m = element(h, w);
        for (double p : {1.0, 0.5}) {
            const double norm = p == 1.0 ? exact_norm_p1(m).value : exact_norm_small(m, PExponent(p)).value;
            CHECK(dual_lower_bound(m, PExponent(p), c) <= norm * (1 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("upper bound from decompositions") {
    auto h = three_point();
    const auto m = FreeElement::delta(h, 2);
    Decomposition route{h, {{1.0, {2, 1}}, {1.2, {2, 1}}}};
    CHECK_THROWS_WITH(upper_bound_from(m, PExponent(1.0), route), doctest::Contains("residual"));
    Decomposition direct{h, {{2.0, {2, 0}}}};
    const PExponent p(0.5);
    const double exact = exact_norm_small(m, p).value;
    CHECK(upper_bound_from(m, p, direct) >= exact * (1 - 1e-12));
    Decomposition padded = direct;
    padded.terms.push_back({0.3, {1, 2}});
    padded.terms.push_back({-0.3, {1, 2}});
    CHECK(p_cost(padded, p) > p_cost(direct, p));
    CHECK(upper_bound_from(m, p, padded) > upper_bound_from(m, p, direct));
}

TEST_CASE("element and decomposition files") {
    auto h = three_point();
    std::istringstream in("# weights\n1 1\n0.5 2\n");
    const auto m = read_element(in, h);
    CHECK(m.weight(1) == 1.0);
    CHECK(m.weight(2) == 0.5);
    std::ostringstream out;
    write_element(out, m);
    std::istringstream back(out.str());
    CHECK(read_element(back, h).max_abs_diff(m) == 0.0);

    std::istringstream bad("1 7\n");
    CHECK_THROWS_WITH(read_element(bad, h), doctest::Contains("line 1"));
    std::istringstream junk("abc\n");
    CHECK_THROWS(read_element(junk, h));

    Decomposition d{h, {{1.5, {1, 2}}}};
    std::ostringstream dout;
    write_decomposition(dout, d);
    std::istringstream din(dout.str());
    const auto d2 = read_decomposition(din, h);
    REQUIRE(d2.terms.size() == 1);
    CHECK(d2.terms[0].a == 1.5);
}

TEST_CASE("canonicalize merges unordered pairs") {
    auto h = three_point();
    Decomposition d{h, {{1.0, {2, 1}}, {0.5, {1, 2}}, {1e-20, {0, 1}}}};
    const auto before = evaluate(d);
    d.canonicalize(1e-15);
    REQUIRE(d.terms.size() == 1);
    CHECK(d.terms[0].m.x == 1);
    CHECK(d.terms[0].a == doctest::Approx(-0.5));
    CHECK(evaluate(d).max_abs_diff(before) < 1e-15);
}
