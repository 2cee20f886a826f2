#pragma once

#include <cstddef>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "lipfree/constants.hpp"
#include "lipfree/dyadic.hpp"
#include "lipfree/free_norm.hpp"

namespace lipfree {

/// Formal combination sum w_y delta(y) over dyadic points of [0,1]^d. The
/// origin is the base point, so it is never stored.
using DyadicElement = std::map<DyadicPoint, double>;

void add_delta(DyadicElement& m, const DyadicPoint& y, double w);
void add_scaled(DyadicElement& m, const DyadicElement& other, double s);
double max_abs_diff(const DyadicElement& a, const DyadicElement& b);

/// (delta(u) - delta(v)) / |u - v|_1^alpha.
DyadicElement molecule_element(const DyadicPoint& u, const DyadicPoint& v, HolderExponent alpha);

/// 2^{n alpha} (delta(v) - (delta(v^i_+) + delta(v^i_-)) / 2) with n the level of v_i.
DyadicElement step_target(const DyadicPoint& v, std::size_t i, HolderExponent alpha);

/// Sparse coefficients over basis indices. A basis index is a nonzero dyadic
/// point v of [0,1]^d; its level is level_of(v).
class BasisCombination {
public:
    void add(const DyadicPoint& v, double c);
    void add(const BasisCombination& o, double s);
    const std::map<DyadicPoint, double>& coeffs() const { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }
    double coeff(const DyadicPoint& v) const;
    double cost(PExponent p) const;
    void prune(double tol);

private:
    std::map<DyadicPoint, double> coeffs_;
};

/// iota(e_v) = 2^{k alpha} (delta(v) - sum_{u in V_{k-1}} Lambda_{2^{-k+1}}(u, v) delta(u)),
/// k = level_of(v). Throws std::invalid_argument for the origin or for an
/// index whose declared level differs from level_of(v).
DyadicElement basis_element(const DyadicPoint& v, HolderExponent alpha);
DyadicElement basis_element(const DyadicPoint& v, int k, HolderExponent alpha);

DyadicElement synthesize(const BasisCombination& c, HolderExponent alpha);

/// Unique coefficients with synthesize(analyze(m)) = m, peeling levels from
/// the finest down. Throws if the support leaves [0,1]^d.
BasisCombination analyze(const DyadicElement& m, HolderExponent alpha);

/// Finite host over the given points plus the origin (base), with the
/// snowflaked l_1 metric |.|_1^alpha, and the conversion into it.
struct DyadicHost {
    MetricPtr space;
    std::map<DyadicPoint, std::size_t> index;
};
DyadicHost make_dyadic_host(std::size_t d, const std::vector<DyadicPoint>& points, HolderExponent alpha);
FreeElement to_free(const DyadicHost& host, const DyadicElement& m);

struct BasisNormCheck {
    double value;  // exact norm, or the decomposition cost when too large
    bool exact;
    double bound;  // d^alpha C(p, 2^d)
};
BasisNormCheck basis_norm_check(const DyadicPoint& v, HolderExponent alpha, PExponent p,
                                std::size_t cap = kDefaultExactCap);

struct HatTerm {
    double nu;
    int level;
    Dyadic v;
};

struct HatResult {
    double mu1;
    double mu2;
    std::vector<HatTerm> terms;  // sorted by level
};

/// Expansion of 2^{n alpha} delta(v) through the endpoints u1, u2 (at level
/// n, u2 - u1 = 2^{-n}) and hat functions at finer levels.
HatResult hat_decompose(const Dyadic& u1, const Dyadic& u2, const Dyadic& v, HolderExponent alpha);

/// Largest residual of the hat identity along a coordinate line, with formal
/// point masses (the point 0 included).
double hat_residual(const Dyadic& u1, const Dyadic& u2, const Dyadic& v, const HatResult& h, HolderExponent alpha);

/// Dyadic path from u to v through mesh-adjacent points of decreasing
/// coarseness. Throws for u == v.
std::vector<Dyadic> line_path(const Dyadic& u, const Dyadic& v);

/// (sum |a_{i+1} - a_i|^{p alpha})^{1/p} / |u - v|^alpha for a path.
double path_cost(const std::vector<Dyadic>& path, HolderExponent alpha, PExponent p);

/// Expansion of the mesh-adjacent line molecule (delta(a) - delta(b)) / |a - b|^alpha:
/// signed hat steps at the listed points plus a multiple of delta(1) - delta(0).
struct LineExpansion {
    std::vector<std::pair<double, Dyadic>> steps;  // coefficient, point at its own level
    double edge = 0.0;
};
LineExpansion line_expansion(const Dyadic& a, const Dyadic& b, HolderExponent alpha);

/// Memoized decompositions over [0,1]^d for a fixed Hölder exponent.
class DyadicBasis {
public:
    DyadicBasis(std::size_t d, HolderExponent alpha);

    std::size_t dim() const { return d_; }
    HolderExponent alpha() const { return alpha_; }

    /// step_target(v, i) as a basis combination.
    const BasisCombination& step(const DyadicPoint& v, std::size_t i);

    /// (delta(u) - delta(v)) / |u - v|^alpha as a basis combination.
    const BasisCombination& molecule(const DyadicPoint& u, const DyadicPoint& v);

private:
    const BasisCombination& point(const DyadicPoint& y, const std::vector<bool>& fixed);
    BasisCombination single_axis(const DyadicPoint& u, const DyadicPoint& v, std::size_t i,
                                 const std::vector<bool>& fixed);
    double pow_alpha(double x) const;

    std::size_t d_;
    HolderExponent alpha_;
    std::map<std::pair<DyadicPoint, std::size_t>, BasisCombination> step_memo_;
    std::map<std::pair<DyadicPoint, DyadicPoint>, BasisCombination> mol_memo_;
    std::map<std::pair<DyadicPoint, std::vector<bool>>, BasisCombination> point_memo_;
};

BasisCombination step_decompose(const DyadicPoint& v, std::size_t i, HolderExponent alpha);
BasisCombination molecule_decompose(const DyadicPoint& u, const DyadicPoint& v, HolderExponent alpha);

struct NormingConfig {
    int k_max = 2;
    int basis_level = -2;  // -2: same as k_max
    std::size_t max_pairs = 2000000;
    std::size_t exact_cap = kDefaultExactCap;
};

struct NormingReport {
    std::size_t d = 0;
    double alpha = 0.0;
    double p = 1.0;
    int k_max = 0;
    int basis_level = 0;
    std::size_t n_basis = 0;
    std::size_t n_basis_exact = 0;
    std::size_t n_molecules = 0;
    double max_basis_norm = 0.0;
    double basis_bound = 0.0;
    double max_molecule_cost = 0.0;
    double molecule_bound = 0.0;
    double max_residual = 0.0;
    double min_molecule_cost = 0.0;
    double bm_bound = 0.0;
    bool complete = true;
    bool basis_ok = true;
    bool molecule_ok = true;
    bool residual_ok = true;
    bool passed() const { return basis_ok && molecule_ok && residual_ok; }
};

NormingReport verify_norming(std::size_t d, HolderExponent alpha, PExponent p, const NormingConfig& cfg);

}  // namespace lipfree
