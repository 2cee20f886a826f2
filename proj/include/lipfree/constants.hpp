#pragma once

#include <cstdint>
#include <utility>

namespace lipfree {

/// Exponent of a p-norm, 0 < p <= 1.
class PExponent {
public:
    explicit PExponent(double p);
    double value() const { return p_; }

private:
    double p_;
};

/// Hölder exponent of a snowflaked metric, 0 < alpha < 1.
class HolderExponent {
public:
    explicit HolderExponent(double alpha);
    double value() const { return alpha_; }

private:
    double alpha_;
};

/// C(p, n) = n^{1/p - 1}: the best constant in (sum w_i^p)^{1/p} <= C |w|_1
/// over n nonnegative weights. Throws std::domain_error for n == 0.
double c_const(PExponent p, std::uint64_t n);

/// Numerical maximum of (sum w_i^p)^{1/p} over the simplex sum w_i <= 1,
/// by grid search with `grid_resolution` steps per unit of mass, followed
/// by pairwise grid refinement, plus the uniform candidate w_i = 1/n.
/// Never exceeds c_const(p, n) beyond rounding.
double c_const_sup_oracle(PExponent p, std::uint64_t n, std::uint64_t grid_resolution);

/// Step constant rho(p, alpha) bounding the decomposition of second
/// differences into the dyadic basis.
double rho(PExponent p, HolderExponent alpha);

/// Face-induction constant tau(p, alpha, d) for molecules over dyadic points.
double tau(PExponent p, HolderExponent alpha, std::uint64_t d);

struct RetractionBounds {
    double lower;
    double upper;
};

/// Lipschitz constant sandwich of the cube-lattice retraction into F_p(V):
/// lower = C(p, 2^{d-1}), upper = C(p, 2^{d-1}) C(p, d) C(p, 3).
RetractionBounds retraction_bounds(PExponent p, std::uint64_t d);

/// Banach-Mazur bound C(p, 2^d) rho^d tau^d between F_p([0,1]^d, |.|^alpha)
/// and l_p.
/// Overflows to +inf for extreme (p, alpha, d); log_bm_bound stays finite.
double bm_bound(PExponent p, HolderExponent alpha, std::uint64_t d);
double log_bm_bound(PExponent p, HolderExponent alpha, std::uint64_t d);

/// Cost bound of the one-dimensional hat expansion: 2^{-alpha} (1/(1-2^{-p alpha}))^{1/p}.
double hat_cost_bound(PExponent p, HolderExponent alpha);

/// Bound of the dyadic path cost: 2^{1/p} (1/(1-2^{-p alpha}))^{1/p}.
double path_cost_bound(PExponent p, HolderExponent alpha);

}  // namespace lipfree
