#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lipfree/constants.hpp"
#include "lipfree/free_norm.hpp"
#include "lipfree/lambda.hpp"

namespace lipfree {

/// A cube complex together with its vertex set V as a pointed l_1 space.
class RetractionContext {
public:
    RetractionContext(CubeComplex complex, PExponent p);

    const CubeComplex& complex() const { return complex_; }
    PExponent p() const { return p_; }
    const MetricPtr& vertex_space() const { return space_; }
    std::size_t index_of(const IntVec& u) const { return complex_.vertex_index(u); }

private:
    CubeComplex complex_;
    PExponent p_;
    MetricPtr space_;
};

/// Full vertex weights (the base vertex included), keyed by lattice index.
using VertexMeasure = std::map<IntVec, double>;

/// The weights Lambda(v, x) of r(x), base vertex included.
VertexMeasure retract_measure(const RetractionContext& ctx, const RealVec& x);

/// r(x) = sum_v Lambda(v, x) delta_V(v). Throws if x lies outside K.
FreeElement retract(const RetractionContext& ctx, const RealVec& x);

/// sum w_v delta_V(v) as an element of F_p(V).
FreeElement measure_to_element(const RetractionContext& ctx, const VertexMeasure& mu);

/// Moves every weight from v to v + shift. The shift must lie in R Z^d and
/// every shifted vertex must belong to V.
FreeElement translate_element(const RetractionContext& ctx, const VertexMeasure& mu, const RealVec& shift);

/// Exact norm of the image of m under v -> R v + R shift (lhs) and R times the
/// exact norm of m (rhs). The host of m must carry coordinates.
std::pair<double, double> rescale_check(const FreeElement& m, double R, const IntVec& shift, PExponent p,
                                        std::size_t cap = kDefaultExactCap);

/// The decomposition of r(x) - r(y) built coordinate by coordinate inside a
/// cube and bridged across cubes by an integer translation.
Decomposition lipschitz_upper_decomposition(const RetractionContext& ctx, const RealVec& x, const RealVec& y);

struct WitnessResult {
    RealVec x;
    RealVec y;
    FreeElement element;  // r(y) - r(x)
    DualCertificate certificate;
    Decomposition upper;  // explicit 2^{d-1}-term decomposition
    double certified_value;
};

/// Witness pair, element, indicator certificate and explicit decomposition
/// for the cube with offset w of the context's complex.
WitnessResult witness_certificate(const RetractionContext& ctx, const IntVec& w);

/// Witness on the unit cube [0,1]^d with base 0.
WitnessResult lower_bound_witness(std::size_t d, PExponent p);

struct SamplerConfig {
    std::size_t n_samples = 1000;
    std::uint64_t seed = 1;
    bool exact_norms = true;
    std::size_t exact_cap = kDefaultExactCap;
    /// Probability that a sampled coordinate is snapped to the lattice.
    double boundary_rate = 0.1;
    /// Exact norms are computed for at most this many sampled pairs.
    std::size_t exact_samples = 20;
};

struct LipschitzReport {
    std::size_t d = 0;
    double p = 1.0;
    double R = 1.0;
    std::size_t n_cubes = 0;
    std::size_t n_vertices = 0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    double max_lower_ratio = 0.0;
    double max_upper_cost_ratio = 0.0;
    double max_residual = 0.0;
    double theoretical_lower = 0.0;
    double theoretical_upper = 0.0;
    double witness_value = 0.0;
    double witness_upper = 0.0;
    bool exact_checked = false;
    bool upper_ok = true;
    bool residual_ok = true;
    bool witness_ok = true;
    bool lower_ok = true;
    bool passed() const { return upper_ok && residual_ok && witness_ok && lower_ok; }
};

/// Samples pairs of points in K, checks every constructed decomposition
/// against the upper constant and records certified lower bounds.
LipschitzReport estimate_lipschitz(const RetractionContext& ctx, const SamplerConfig& cfg);

}  // namespace lipfree
