#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "lipfree/constants.hpp"
#include "lipfree/metric.hpp"

namespace lipfree {

/// A finitely supported element sum w_i delta(i) of P(M). The base point
/// carries no weight (delta(base) = 0) and zero weights are never stored.
class FreeElement {
public:
    explicit FreeElement(MetricPtr host);
    FreeElement(MetricPtr host, const std::map<std::size_t, double>& weights);

    /// delta(i); the zero element when i is the base.
    static FreeElement delta(MetricPtr host, std::size_t i);
    /// delta(x) - delta(y).
    static FreeElement difference(MetricPtr host, std::size_t x, std::size_t y);

    const MetricPtr& host() const { return host_; }
    const std::map<std::size_t, double>& weights() const { return weights_; }
    double weight(std::size_t i) const;
    bool is_zero() const { return weights_.empty(); }

    void add(std::size_t i, double w);
    FreeElement& operator+=(const FreeElement& o);
    FreeElement& operator-=(const FreeElement& o);
    FreeElement operator+(const FreeElement& o) const;
    FreeElement operator-(const FreeElement& o) const;
    FreeElement operator*(double s) const;

    /// Largest coordinate of |this - o|.
    double max_abs_diff(const FreeElement& o) const;
    /// Largest |w_i|.
    double max_abs() const;
    /// Drops weights with |w| <= tol.
    void prune(double tol);

private:
    void check_host(const FreeElement& o) const;

    MetricPtr host_;
    std::map<std::size_t, double> weights_;
};

/// The elementary molecule (delta(x) - delta(y)) / rho(x, y).
struct Molecule {
    std::size_t x;
    std::size_t y;
    bool operator==(const Molecule&) const = default;
    auto operator<=>(const Molecule&) const = default;
};

struct Term {
    double a;
    Molecule m;
};

struct Decomposition {
    MetricPtr host;
    std::vector<Term> terms;

    /// Merges molecules as unordered pairs (x < y, sign folded into a),
    /// sorts them, and drops coefficients with |a| <= tol.
    void canonicalize(double tol = 0.0);
};

/// sum a_i (delta(x_i) - delta(y_i)) / rho(x_i, y_i).
FreeElement evaluate(const Decomposition& decomp);

/// (sum |a_i|^p)^{1/p}.
double p_cost(const Decomposition& decomp, PExponent p);
double p_cost(const std::vector<double>& coeffs, PExponent p);

struct NormResult {
    double value;
    Decomposition witness;
};

/// The p = 1 norm as a minimum-cost transshipment over the complete graph,
/// the base acting as a free source or sink.
NormResult exact_norm_p1(const FreeElement& m);

inline constexpr std::size_t kDefaultExactCap = 8;

/// Exact p-norm by enumerating all molecule supports of size |M| - 1.
/// Throws std::length_error when the host exceeds `cap` points.
NormResult exact_norm_small(const FreeElement& m, PExponent p, std::size_t cap = kDefaultExactCap);

/// Exact p-norm using only molecules with both endpoints in `subset`.
/// Returns +inf when m is not spanned by those molecules.
NormResult restricted_norm(const FreeElement& m, PExponent p, const std::set<std::size_t>& subset,
                           std::size_t cap = kDefaultExactCap);

/// Lipschitz functionals for a lower bound on the norm. Each function is a
/// value per point; activity[u] lists the unordered pairs (i < j) on which
/// function u may be nonzero as a molecule functional.
struct DualCertificate {
    std::vector<std::vector<double>> functions;
    std::size_t kappa = 1;
    std::vector<std::set<std::pair<std::size_t, std::size_t>>> activity;
};

/// Throws std::invalid_argument naming the first violated condition.
void validate_certificate(const PointedFiniteMetric& host, const DualCertificate& cert);

/// (sum_u |<phi_u, m>|^p / kappa)^{1/p}, after validating the certificate.
double dual_lower_bound(const FreeElement& m, PExponent p, const DualCertificate& cert);

/// p_cost(decomp) after checking that decomp evaluates to m within `tol`
/// per coordinate; throws std::invalid_argument with the residual otherwise.
double upper_bound_from(const FreeElement& m, PExponent p, const Decomposition& decomp, double tol = 1e-9);

/// Text formats: "w index" per element line, "a x y" per decomposition line.
/// Blank lines and lines starting with '#' are skipped.
FreeElement read_element(std::istream& in, MetricPtr host);
Decomposition read_decomposition(std::istream& in, MetricPtr host);
void write_element(std::ostream& out, const FreeElement& m);
void write_decomposition(std::ostream& out, const Decomposition& decomp);

}  // namespace lipfree
