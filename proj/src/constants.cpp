#include "lipfree/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lipfree {

PExponent::PExponent(double p) : p_(p) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::domain_error("p exponent must lie in (0, 1], got " + std::to_string(p));
    }
}

HolderExponent::HolderExponent(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("Hölder exponent must lie in (0, 1), got " + std::to_string(alpha));
    }
}

namespace {

// C(q, n) for an exponent q that may be any positive real <= 1 (tau uses p*alpha).
double c_raw(double q, double n) { return std::pow(n, 1.0 / q - 1.0); }

double p_sum(const std::vector<double>& w, double p) {
    double s = 0.0;
    for (double x : w) {
        if (x > 0.0) s += std::pow(x, p);
    }
    return std::pow(s, 1.0 / p);
}

// Number of compositions of `total` into `parts` nonnegative parts, saturating.
double composition_count(std::uint64_t total, std::uint64_t parts) {
    // binom(total + parts - 1, parts - 1)
    double c = 1.0;
    for (std::uint64_t i = 1; i < parts; ++i) {
        c *= static_cast<double>(total + i) / static_cast<double>(i);
        if (c > 1e18) return c;
    }
    return c;
}

// Enumerates all grid points of the simplex with `res` units of mass spread
// over n coordinates and keeps the best.
void enumerate_simplex(std::uint64_t n, std::uint64_t res, double p, std::vector<double>& best,
                       double& best_val) {
    std::vector<std::uint64_t> k(n, 0);
    std::vector<double> w(n, 0.0);
    // Coordinate i receives 0..remaining units; the last takes the rest.
    auto recurse = [&](auto&& self, std::uint64_t i, std::uint64_t remaining) -> void {
        if (i + 1 == n) {
            k[i] = remaining;
            for (std::uint64_t j = 0; j < n; ++j) {
                w[j] = static_cast<double>(k[j]) / static_cast<double>(res);
            }
            double v = p_sum(w, p);
            if (v > best_val) {
                best_val = v;
                best = w;
            }
            return;
        }
        for (std::uint64_t a = 0; a <= remaining; ++a) {
            k[i] = a;
            self(self, i + 1, remaining - a);
        }
    };
    recurse(recurse, 0, res);
}

}  // namespace

double c_const(PExponent p, std::uint64_t n) {
    if (n == 0) throw std::domain_error("C(p, n) requires n >= 1");
    return c_raw(p.value(), static_cast<double>(n));
}

double c_const_sup_oracle(PExponent p, std::uint64_t n, std::uint64_t grid_resolution) {
    if (n == 0) throw std::domain_error("C(p, n) requires n >= 1");
    if (grid_resolution == 0) throw std::domain_error("grid resolution must be positive");
    const double pv = p.value();

    // Full enumeration on a grid coarse enough to stay within budget.
    constexpr double kBudget = 2e5;
    std::uint64_t coarse = grid_resolution;
    while (coarse > 1 && composition_count(coarse, n) > kBudget) coarse /= 2;

    std::vector<double> best;
    double best_val = -1.0;
    enumerate_simplex(n, coarse, pv, best, best_val);

    // Pairwise refinement at full resolution: redistribute the mass of two
    // coordinates along a 1-D grid. a^p + (m - a)^p is concave in a, so an
    // integer ternary search finds the grid maximum of each move.
    const double step = 1.0 / static_cast<double>(grid_resolution);
    for (int sweep = 0; sweep < 200; ++sweep) {
        bool improved = false;
        for (std::uint64_t i = 0; i < n; ++i) {
            for (std::uint64_t j = i + 1; j < n; ++j) {
                const double mass = best[i] + best[j];
                const auto units = static_cast<std::int64_t>(std::floor(mass / step + 1e-9));
                auto split_value = [&](std::int64_t a) {
                    const double wi = static_cast<double>(a) * step;
                    const double wj = std::max(0.0, mass - wi);
                    return (wi > 0.0 ? std::pow(wi, pv) : 0.0) + (wj > 0.0 ? std::pow(wj, pv) : 0.0);
                };
                std::int64_t lo = 0;
                std::int64_t hi = units;
                while (hi - lo > 2) {
                    const std::int64_t m1 = lo + (hi - lo) / 3;
                    const std::int64_t m2 = hi - (hi - lo) / 3;
                    if (split_value(m1) < split_value(m2)) {
                        lo = m1 + 1;
                    } else {
                        hi = m2 - 1;
                    }
                }
                std::int64_t arg = lo;
                for (std::int64_t a = lo; a <= hi; ++a) {
                    if (split_value(a) > split_value(arg)) arg = a;
                }
                std::vector<double> w = best;
                w[i] = static_cast<double>(arg) * step;
                w[j] = std::max(0.0, mass - w[i]);
                const double v = p_sum(w, pv);
                if (v > best_val * (1.0 + 1e-15)) {
                    best_val = v;
                    best = std::move(w);
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }

    // Analytic candidate at the barycenter.
    const std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
    best_val = std::max(best_val, p_sum(uniform, pv));
    return best_val;
}

double rho(PExponent p, HolderExponent alpha) {
    const double pv = p.value();
    const double pa = pv * alpha.value();
    const double c2 = c_const(p, 2);
    const double series = std::pow(2.0, -pa) / (1.0 - std::pow(2.0, -pa));
    return std::pow(std::pow(c2, pv) + (1.0 + std::pow(2.0, 1.0 - pv)) * series, 1.0 / pv);
}

double tau(PExponent p, HolderExponent alpha, std::uint64_t d) {
    if (d == 0) throw std::domain_error("tau requires d >= 1");
    const double pv = p.value();
    const double a = alpha.value();
    const double dd = static_cast<double>(d);
    const double f_coord = std::pow(c_raw(pv * a, dd), a);
    const double f_two = std::pow(2.0, 2.0 / pv);
    const double f_mesh = std::pow(1.0 / (1.0 - std::pow(2.0, pv * (a - 1.0))), 1.0 / pv);
    const double f_path = std::pow(1.0 / (1.0 - std::pow(2.0, -pv * a)), 1.0 / pv);
    const double f_corner = std::pow(1.0 + std::pow(dd - 1.0, pv * a), 1.0 / pv);
    return f_coord * f_two * f_mesh * f_path * f_corner;
}

RetractionBounds retraction_bounds(PExponent p, std::uint64_t d) {
    if (d == 0) throw std::domain_error("retraction bounds require d >= 1");
    const double lower = c_const(p, std::uint64_t{1} << (d - 1));
    return {lower, lower * c_const(p, d) * c_const(p, 3)};
}

double bm_bound(PExponent p, HolderExponent alpha, std::uint64_t d) {
    if (d == 0) throw std::domain_error("Banach-Mazur bound requires d >= 1");
    const double dd = static_cast<double>(d);
    return c_const(p, std::uint64_t{1} << d) * std::pow(rho(p, alpha), dd) *
           std::pow(tau(p, alpha, d), dd);
}

double log_bm_bound(PExponent p, HolderExponent alpha, std::uint64_t d) {
    if (d == 0) throw std::domain_error("Banach-Mazur bound requires d >= 1");
    const double pv = p.value();
    const double a = alpha.value();
    const double pa = pv * a;
    const double dd = static_cast<double>(d);
    const double ln2 = std::log(2.0);
    const double log_c = (1.0 / pv - 1.0) * dd * ln2;
    const double c2p = std::pow(2.0, 1.0 - pv);  // C(p, 2)^p
    const double log_rho = std::log(c2p + (1.0 + c2p) * std::pow(2.0, -pa) / -std::expm1(-pa * ln2)) / pv;
    const double log_tau = a * (1.0 / pa - 1.0) * std::log(dd) + 2.0 / pv * ln2 -
                           std::log(-std::expm1(pv * (a - 1.0) * ln2)) / pv - std::log(-std::expm1(-pa * ln2)) / pv +
                           std::log1p(std::pow(dd - 1.0, pa)) / pv;
    return log_c + dd * (log_rho + log_tau);
}

double hat_cost_bound(PExponent p, HolderExponent alpha) {
    const double pa = p.value() * alpha.value();
    return std::pow(2.0, -alpha.value()) * std::pow(1.0 / (1.0 - std::pow(2.0, -pa)), 1.0 / p.value());
}

double path_cost_bound(PExponent p, HolderExponent alpha) {
    const double pa = p.value() * alpha.value();
    return std::pow(2.0, 1.0 / p.value()) * std::pow(1.0 / (1.0 - std::pow(2.0, -pa)), 1.0 / p.value());
}

}  // namespace lipfree
