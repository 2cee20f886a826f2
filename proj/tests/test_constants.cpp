#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lipfree/constants.hpp"

using namespace lipfree;

TEST_CASE("exponent ranges") {
    CHECK_THROWS_AS(PExponent(0.0), std::domain_error);
    CHECK_THROWS_AS(PExponent(1.5), std::domain_error);
    CHECK_THROWS_AS(PExponent(std::nan("")), std::domain_error);
    CHECK_NOTHROW(PExponent(1.0));
    CHECK_THROWS_AS(HolderExponent(1.0), std::domain_error);
    CHECK_THROWS_AS(HolderExponent(0.0), std::domain_error);
    CHECK_NOTHROW(HolderExponent(0.25));
}

TEST_CASE("c_const closed form") {
    CHECK(c_const(PExponent(1.0), 5) == 1.0);
    CHECK(c_const(PExponent(0.5), 2) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c_const(PExponent(0.5), 8) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(c_const(PExponent(0.25), 1) == 1.0);
    CHECK_THROWS_AS(c_const(PExponent(0.5), 0), std::domain_error);
}

TEST_CASE("sup oracle approaches the closed form from below") {
    CHECK(c_const_sup_oracle(PExponent(1.0), 3, 10) == doctest::Approx(1.0));
    CHECK(std::abs(c_const_sup_oracle(PExponent(0.5), 2, 100) - 2.0) < 1e-3);
    CHECK(std::abs(c_const_sup_oracle(PExponent(0.75), 4, 100) - c_const(PExponent(0.75), 4)) < 1e-3);
    for (double p : {0.3, 0.6, 0.9}) {
        for (std::uint64_t n : {2u, 3u, 5u}) {
            const double lo = c_const_sup_oracle(PExponent(p), n, 20);
            CHECK(lo <= c_const(PExponent(p), n) * (1 + 1e-12));
        }
    }
}

TEST_CASE("sup oracle: random simplex points never beat the closed form") {
    // hand-rolled generator: LCG weights normalised to the simplex
    std::uint64_t s = 12345;
    auto next = [&] {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    };
    for (int trial = 0; trial < 500; ++trial) {
        const double p = 0.1 + 0.9 * next();
        const std::uint64_t n = 1 + static_cast<std::uint64_t>(next() * 10);
        std::vector<double> w(n);
        double total = 0.0;
        for (auto& x : w) total += (x = next());
        double acc = 0.0;
        for (auto x : w) acc += std::pow(x / total, p);
        CHECK(std::pow(acc, 1.0 / p) <= c_const(PExponent(p), n) * (1 + 1e-12));
    }
}

TEST_CASE("rho") {
    const double a = std::pow(2.0, -0.5);
    CHECK(rho(PExponent(1.0), HolderExponent(0.5)) == doctest::Approx(1 + 2 * a / (1 - a)).epsilon(1e-14));
    CHECK(rho(PExponent(1.0), HolderExponent(0.999999)) == doctest::Approx(3.0).epsilon(1e-5));
    for (double p : {0.25, 0.5, 1.0}) {
        for (double al : {0.1, 0.5, 0.9}) CHECK(rho(PExponent(p), HolderExponent(al)) > 1.0);
    }
}

TEST_CASE("tau") {
    const double a = std::pow(2.0, -0.5);
    CHECK(tau(PExponent(1.0), HolderExponent(0.5), 1) == doctest::Approx(4 / ((1 - a) * (1 - a))).epsilon(1e-14));
    // p = 1/2, alpha = 1/2, d = 2: the five factors evaluated one by one
    const double f1 = std::pow(std::pow(2.0, 1 / 0.25 - 1), 0.5);
    const double f2 = std::pow(2.0, 4.0);
    const double f3 = std::pow(1 / (1 - std::pow(2.0, 0.5 * (0.5 - 1))), 2.0);
    const double f4 = std::pow(1 / (1 - std::pow(2.0, -0.25)), 2.0);
    const double f5 = std::pow(1 + 1.0, 2.0);
    CHECK(tau(PExponent(0.5), HolderExponent(0.5), 2) == doctest::Approx(f1 * f2 * f3 * f4 * f5).epsilon(1e-13));
    for (double p : {0.3, 1.0}) {
        for (std::uint64_t d = 1; d < 6; ++d) {
            CHECK(tau(PExponent(p), HolderExponent(0.4), d + 1) >= tau(PExponent(p), HolderExponent(0.4), d));
        }
    }
}

TEST_CASE("retraction bounds") {
    auto b = retraction_bounds(PExponent(1.0), 3);
    CHECK(b.lower == 1.0);
    CHECK(b.upper == 1.0);
    b = retraction_bounds(PExponent(0.5), 2);
    CHECK(b.lower == doctest::Approx(2.0));
    CHECK(b.upper == doctest::Approx(12.0));
    b = retraction_bounds(PExponent(0.5), 1);
    CHECK(b.lower == doctest::Approx(1.0));
    CHECK(b.upper == doctest::Approx(3.0));
}

TEST_CASE("bm bound composes the factors") {
    const PExponent p(1.0);
    const HolderExponent al(0.5);
    CHECK(bm_bound(p, al, 1) == doctest::Approx(rho(p, al) * tau(p, al, 1)).epsilon(1e-14));
    CHECK(bm_bound(p, al, 3) == doctest::Approx(std::pow(rho(p, al) * tau(p, al, 3), 3)).epsilon(1e-13));
    const PExponent q(0.5);
    CHECK(bm_bound(q, al, 2) ==
          doctest::Approx(4.0 * std::pow(rho(q, al), 2) * std::pow(tau(q, al, 2), 2)).epsilon(1e-13));
    CHECK(std::isfinite(bm_bound(PExponent(0.5), HolderExponent(0.1), 4)));
    // beyond double range the logarithm is still available
    CHECK(std::isfinite(log_bm_bound(PExponent(0.1), HolderExponent(0.05), 4)));
    CHECK(log_bm_bound(PExponent(0.1), HolderExponent(0.05), 4) / std::log(10.0) == doctest::Approx(333.9443).epsilon(1e-6));
    for (double p : {1.0, 0.6, 0.3}) {
        for (double al : {0.2, 0.7}) {
            for (std::uint64_t d = 1; d <= 3; ++d) {
                CHECK(log_bm_bound(PExponent(p), HolderExponent(al), d) ==
                      doctest::Approx(std::log(bm_bound(PExponent(p), HolderExponent(al), d))).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("hat and path bounds") {
    const double g = 1 / (1 - std::pow(2.0, -0.5));
    CHECK(hat_cost_bound(PExponent(1.0), HolderExponent(0.5)) == doctest::Approx(std::pow(2.0, -0.5) * g));
    CHECK(path_cost_bound(PExponent(1.0), HolderExponent(0.5)) == doctest::Approx(2 * g));
}
