#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lipfree {

using RealVec = std::vector<double>;

/// A finite pointed metric space: distance matrix plus a base point.
///
/// Construction validates the metric axioms (zero diagonal, symmetry,
/// positivity off the diagonal, triangle inequality up to a relative slack
/// of 1e-12). Points may carry coordinates when the space was built from
/// vectors; they are kept for rescaling and reporting only.
class PointedFiniteMetric {
public:
    PointedFiniteMetric(std::vector<std::vector<double>> dist, std::size_t base,
                        std::vector<RealVec> coords = {});

    /// Skips the O(n^3) triangle check; for matrices that are metrics by
    /// construction (l_1 distances and their snowflakes).
    struct TrustedTag {};
    PointedFiniteMetric(TrustedTag, std::vector<std::vector<double>> dist, std::size_t base,
                        std::vector<RealVec> coords = {});

    std::size_t size() const { return dist_.size(); }
    std::size_t base() const { return base_; }
    double dist(std::size_t i, std::size_t j) const { return dist_[i][j]; }
    const std::vector<std::vector<double>>& matrix() const { return dist_; }

    bool has_coords() const { return !coords_.empty(); }
    const RealVec& coords(std::size_t i) const { return coords_.at(i); }
    const std::vector<RealVec>& all_coords() const { return coords_; }

    /// Index of the point with exactly these coordinates, if any.
    std::optional<std::size_t> find(const RealVec& x) const;

private:
    std::vector<std::vector<double>> dist_;
    std::size_t base_;
    std::vector<RealVec> coords_;
};

using MetricPtr = std::shared_ptr<const PointedFiniteMetric>;

/// First violated metric axiom, or empty if the matrix is a metric.
std::optional<std::string> find_metric_violation(const std::vector<std::vector<double>>& dist,
                                                 double rel_tol = 1e-12);

/// Points of R^d with the l_1 distance. Throws on duplicate points.
MetricPtr l1_space(std::vector<RealVec> points, std::size_t base);

/// Snowflake rho -> rho^alpha. alpha = 1 is accepted as the identity.
MetricPtr holder_distort(const PointedFiniteMetric& space, double alpha);

/// Reads a point set: first line "d base", then one point per line with d
/// whitespace-separated coordinates. Builds the l_1 space.
MetricPtr read_point_set(std::istream& in);
MetricPtr load_point_set(const std::string& path);

double l1_distance(const RealVec& a, const RealVec& b);

}  // namespace lipfree
