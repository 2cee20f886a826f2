#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lipfree/metric.hpp"
#include "lipfree/rng.hpp"

namespace lipfree {

using IntVec = std::vector<std::int64_t>;

/// x^{(w)}: x if w = 1, 1 - x if w = 0, and 0 otherwise.
double scalar_coeff(double x, std::int64_t w);

/// A union of axis-parallel cubes R(w + [0,1]^d) indexed by integer offsets w.
/// Vertices are stored as lattice indices u (the point R u).
class CubeComplex {
public:
    /// base_vertex is a lattice index and must be a vertex of some cube.
    CubeComplex(std::size_t d, double R, std::vector<IntVec> offsets, IntVec base_vertex);

    std::size_t dim() const { return d_; }
    double scale() const { return R_; }
    const std::set<IntVec>& offsets() const { return offsets_; }
    bool has_cube(const IntVec& w) const { return offsets_.count(w) != 0; }

    /// Vertex lattice indices in lexicographic order.
    const std::vector<IntVec>& vertices() const { return vertices_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    /// Position of a lattice index in vertices(); throws if absent.
    std::size_t vertex_index(const IntVec& u) const;
    bool has_vertex(const IntVec& u) const { return index_.count(u) != 0; }
    const IntVec& base_vertex() const { return base_; }
    std::size_t base_index() const { return vertex_index(base_); }
    /// The point R u.
    RealVec vertex_point(const IntVec& u) const;

    /// Offsets of all cubes of the complex containing x, in lexicographic order.
    std::vector<IntVec> containing_cubes(const RealVec& x) const;
    bool contains(const RealVec& x) const { return !containing_cubes(x).empty(); }

    /// Vertices with the l_1 metric and base_vertex as base point.
    MetricPtr vertex_space() const;

private:
    std::size_t d_;
    double R_;
    std::set<IntVec> offsets_;
    IntVec base_;
    std::vector<IntVec> vertices_;
    std::map<IntVec, std::size_t> index_;
};

struct VertexWeight {
    IntVec vertex;
    double weight;
};

/// Lambda^d_R(R v, x) evaluated with the cube w (x must lie in R(w + [0,1]^d)).
double lambda_in_cube(double R, const IntVec& w, const IntVec& v, const RealVec& x);

/// Lambda^d_R(R v, x) on the whole of R^d (no complex needed).
double lambda_unbounded(double R, const IntVec& v, const RealVec& x);

/// Lambda^d_R(R v, x) for x in the complex. Throws std::invalid_argument if
/// no cube contains x.
double lambda(const CubeComplex& complex, const IntVec& v, const RealVec& x);

/// Nonzero weights of x using the cube w, sorted by vertex.
std::vector<VertexWeight> lambda_support_in_cube(double R, const IntVec& w, const RealVec& x);

/// Nonzero weights of x, sorted by vertex; at most 2^d entries summing to 1.
std::vector<VertexWeight> lambda_support(const CubeComplex& complex, const RealVec& x);

/// Complex file: "d R", then one integer offset per line; the last nonempty
/// line is the base vertex lattice index.
CubeComplex read_complex(std::istream& in);
CubeComplex load_complex(const std::string& path);

/// The single cube [0, R]^d with base vertex 0.
CubeComplex unit_cube_complex(std::size_t d, double R = 1.0);

/// Uniform point of R(w + [0,1]^d); each coordinate is snapped to a face with
/// probability boundary_rate.
RealVec sample_in_cube(double R, const IntVec& w, Rng& rng, double boundary_rate);

struct PartitionCheck {
    std::size_t n_points = 0;
    double max_sum_error = 0.0;   // |sum_v Lambda(v, x) - 1|
    double min_weight = 0.0;
    std::size_t max_support = 0;
    double max_kronecker_error = 0.0;  // over all pairs of vertices
    bool passed(double tol = 1e-12) const {
        return max_sum_error <= tol && min_weight >= 0.0 && max_kronecker_error == 0.0;
    }
};

/// Partition of unity and nonnegativity at random points, Kronecker property
/// at every vertex.
PartitionCheck check_partition(const CubeComplex& complex, std::size_t n_points, std::uint64_t seed,
                               double boundary_rate = 0.1);

}  // namespace lipfree
