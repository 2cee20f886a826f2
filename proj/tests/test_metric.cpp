#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lipfree/dyadic.hpp"
#include "lipfree/metric.hpp"
#include "lipfree/rng.hpp"

using namespace lipfree;

TEST_CASE("metric validation") {
    CHECK_NOTHROW(PointedFiniteMetric({{0, 1}, {1, 0}}, 0));
    CHECK_THROWS_AS(PointedFiniteMetric({{0, 1}, {2, 0}}, 0), std::invalid_argument);
    CHECK_THROWS_AS(PointedFiniteMetric({{0, 0}, {0, 0}}, 0), std::invalid_argument);
    CHECK_THROWS_AS(PointedFiniteMetric({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}, 0), std::invalid_argument);
    CHECK_THROWS_AS(PointedFiniteMetric({{0, 1}, {1, 0}}, 2), std::invalid_argument);
    CHECK(find_metric_violation({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}).has_value());
    CHECK_FALSE(find_metric_violation({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}).has_value());
}

TEST_CASE("l1 space") {
    auto s = l1_space({{0, 0}, {1, 0}, {1, 1}}, 0);
    CHECK(s->dist(0, 2) == 2.0);
    CHECK_THROWS_AS(l1_space({{0, 0}, {0, 0}}, 0), std::invalid_argument);
    auto sq = l1_space({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, 0);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) CHECK((sq->dist(i, j) == 1.0 || sq->dist(i, j) == 2.0));
    }
    CHECK(sq->find({1, 1}).value() == 3);
    CHECK_FALSE(sq->find({0.5, 1}).has_value());
}

TEST_CASE("holder distortion") {
    auto s = l1_space({{0}, {4}}, 0);
    CHECK(holder_distort(*s, 0.5)->dist(0, 1) == doctest::Approx(2.0));
    CHECK(holder_distort(*s, 1.0)->dist(0, 1) == 4.0);
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<RealVec> pts;
        for (int i = 0; i < 5; ++i) pts.push_back({uniform01(rng), uniform01(rng), uniform01(rng)});
        auto h = holder_distort(*l1_space(pts, 0), 0.3);
        CHECK_FALSE(find_metric_violation(h->matrix()).has_value());
        // brute-force triangle check, independent of the validator
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j)
                for (std::size_t k = 0; k < 5; ++k) CHECK(h->dist(i, k) <= (h->dist(i, j) + h->dist(j, k)) * (1 + 1e-12));
    }
}

TEST_CASE("point set file") {
    std::istringstream in("2 0\n0 0\n1 0\n# comment\n\n1 1\n");
    auto s = read_point_set(in);
    CHECK(s->size() == 3);
    CHECK(s->dist(1, 2) == 1.0);
    std::istringstream bad("2 0\n0 0\n1\n");
    CHECK_THROWS(read_point_set(bad));
    std::istringstream bad_base("1 5\n0\n1\n");
    CHECK_THROWS(read_point_set(bad_base));
}

TEST_CASE("dyadic scalars") {
    CHECK(Dyadic(2, 2) == Dyadic(1, 1));
    CHECK(Dyadic(3, 3).level() == 3);
    CHECK(coordinate_level(Dyadic(3, 3)) == 3);
    CHECK(Dyadic(1, 1) + Dyadic(1, 2) == Dyadic(3, 2));
    CHECK(Dyadic(1, 2) < Dyadic(1, 1));
    CHECK(parse_dyadic("3/8") == Dyadic(3, 3));
    CHECK(parse_dyadic("1") == Dyadic::integer(1));
    CHECK_THROWS(parse_dyadic("1/3"));
    CHECK_THROWS(parse_dyadic("x"));
    CHECK(floor_to_level(Dyadic(7, 3), 1) == Dyadic(1, 1));
    CHECK(floor_to_level(Dyadic(-1, 3), 0) == Dyadic::integer(-1));

    auto [a, b] = neighbors(Dyadic(1, 1));
    CHECK(a == Dyadic());
    CHECK(b == Dyadic::integer(1));
    std::tie(a, b) = neighbors(Dyadic(3, 3));
    CHECK(a == Dyadic(1, 2));
    CHECK(b == Dyadic(1, 1));
    CHECK_THROWS_AS(neighbors(Dyadic::integer(1)), std::invalid_argument);
    for (int n = 1; n <= 6; ++n) {
        for (std::int64_t k = 1; k < (std::int64_t{1} << n); k += 2) {
            const Dyadic x(k, n);
            auto [lo, hi] = neighbors(x);
            CHECK(lo < x);
            CHECK(x < hi);
            CHECK(lo.level() < n);
            CHECK(hi.level() < n);
            CHECK(lo >= Dyadic());
            CHECK(hi <= Dyadic::integer(1));
            CHECK(hi - lo == Dyadic(1, n - 1));
        }
    }
}

TEST_CASE("dyadic points and grids") {
    const DyadicPoint v({Dyadic(1, 1), Dyadic(1, 2)});
    CHECK(v.level() == 2);
    CHECK(level_of(v) == 2);
    CHECK(dyadic_grid(1, 0).size() == 2);
    CHECK(dyadic_grid(2, 1).size() == 9);
    CHECK(dyadic_grid(3, 2).size() == 125);
    CHECK(dyadic_grid(2, -1).size() == 1);
    CHECK(dyadic_grid(2, -1).front().is_origin());
    for (const auto& w : dyadic_grid(2, 3)) {
        CHECK(w.level() <= 3);
        bool odd = false;
        for (const auto& c : w.coords()) odd = odd || (c.numerator_at(3) % 2 != 0);
        CHECK((w.level() == 3) == odd);
    }
    CHECK(l1_dyadic(v, DyadicPoint::origin(2)) == Dyadic(3, 2));
}
