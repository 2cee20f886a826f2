#include "lipfree/lambda.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lipfree {

namespace {

// x / R with near-integers snapped to the integer.
double lattice_coord(double x, double R) {
    const double t = x / R;
    const double r = std::round(t);
    if (std::abs(t - r) <= 1e-12 * std::max(1.0, std::abs(t))) return r;
    return t;
}

// Local coordinate in [0,1] of x inside cube offset w along one axis.
double local_coord(double x, double R, std::int64_t w) {
    return lattice_coord(x, R) - static_cast<double>(w);
}

std::string vec_string(const IntVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

}  // namespace

double scalar_coeff(double x, std::int64_t w) {
    if (w == 1) return x;
    if (w == 0) return 1.0 - x;
    return 0.0;
}

CubeComplex::CubeComplex(std::size_t d, double R, std::vector<IntVec> offsets, IntVec base_vertex)
    : d_(d), R_(R), base_(std::move(base_vertex)) {
    if (d_ == 0) throw std::invalid_argument("cube complex requires d >= 1");
    if (!(R_ > 0.0) || !std::isfinite(R_)) throw std::invalid_argument("cube complex scale must be positive");
    if (offsets.empty()) throw std::invalid_argument("cube complex needs at least one cube");
    if (d_ > 20) throw std::invalid_argument("cube complex dimension too large");
    for (auto& w : offsets) {
        if (w.size() != d_) throw std::invalid_argument("offset " + vec_string(w) + " has wrong dimension");
        offsets_.insert(std::move(w));
    }
    std::set<IntVec> verts;
    const std::size_t corners = std::size_t{1} << d_;
    for (const auto& w : offsets_) {
        for (std::size_t mask = 0; mask < corners; ++mask) {
            IntVec u = w;
            for (std::size_t i = 0; i < d_; ++i) u[i] += static_cast<std::int64_t>((mask >> i) & 1U);
            verts.insert(std::move(u));
        }
    }
    vertices_.assign(verts.begin(), verts.end());
    for (std::size_t i = 0; i < vertices_.size(); ++i) index_.emplace(vertices_[i], i);
    if (!has_vertex(base_)) throw std::invalid_argument("base vertex " + vec_string(base_) + " is not a vertex");
}

std::size_t CubeComplex::vertex_index(const IntVec& u) const {
    auto it = index_.find(u);
    if (it == index_.end()) throw std::invalid_argument("not a vertex of the complex: " + vec_string(u));
    return it->second;
}

RealVec CubeComplex::vertex_point(const IntVec& u) const {
    RealVec x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) x[i] = R_ * static_cast<double>(u[i]);
    return x;
}

std::vector<IntVec> CubeComplex::containing_cubes(const RealVec& x) const {
    if (x.size() != d_) throw std::invalid_argument("point has wrong dimension");
    // Per axis: floor(x/R), plus floor - 1 when x sits on a lattice hyperplane.
    std::vector<std::vector<std::int64_t>> choices(d_);
    for (std::size_t i = 0; i < d_; ++i) {
        if (!std::isfinite(x[i])) return {};
        const double t = lattice_coord(x[i], R_);
        const auto f = static_cast<std::int64_t>(std::floor(t));
        if (t == static_cast<double>(f)) choices[i] = {f - 1, f};
        else choices[i] = {f};
    }
    std::vector<IntVec> out;
    IntVec w(d_);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == d_) {
            if (has_cube(w)) out.push_back(w);
            return;
        }
        for (auto c : choices[i]) {
            w[i] = c;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}

MetricPtr CubeComplex::vertex_space() const {
    std::vector<RealVec> pts;
    pts.reserve(vertices_.size());
    for (const auto& u : vertices_) pts.push_back(vertex_point(u));
    return l1_space(std::move(pts), base_index());
}

double lambda_in_cube(double R, const IntVec& w, const IntVec& v, const RealVec& x) {
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        prod *= scalar_coeff(local_coord(x[i], R, w[i]), v[i] - w[i]);
        if (prod == 0.0) return 0.0;
    }
    return prod;
}

double lambda_unbounded(double R, const IntVec& v, const RealVec& x) {
    if (v.size() != x.size()) throw std::invalid_argument("dimension mismatch in lambda");
    IntVec w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = static_cast<std::int64_t>(std::floor(lattice_coord(x[i], R)));
    return lambda_in_cube(R, w, v, x);
}

double lambda(const CubeComplex& complex, const IntVec& v, const RealVec& x) {
    if (v.size() != complex.dim()) throw std::invalid_argument("vertex has wrong dimension");
    const auto cubes = complex.containing_cubes(x);
    if (cubes.empty()) throw std::invalid_argument("point lies outside the cube complex");
    return lambda_in_cube(complex.scale(), cubes.front(), v, x);
}

std::vector<VertexWeight> lambda_support_in_cube(double R, const IntVec& w, const RealVec& x) {
    const std::size_t d = x.size();
    std::vector<double> local(d);
    for (std::size_t i = 0; i < d; ++i) {
        local[i] = local_coord(x[i], R, w[i]);
        if (local[i] < 0.0 || local[i] > 1.0) throw std::invalid_argument("point lies outside the given cube");
    }
    std::vector<VertexWeight> out;
    const std::size_t corners = std::size_t{1} << d;
    for (std::size_t mask = 0; mask < corners; ++mask) {
        IntVec u = w;
        double prod = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            const std::int64_t bit = static_cast<std::int64_t>((mask >> i) & 1U);
            u[i] += bit;
            prod *= scalar_coeff(local[i], bit);
        }
        if (prod != 0.0) out.push_back({std::move(u), prod});
    }
    std::sort(out.begin(), out.end(), [](const VertexWeight& a, const VertexWeight& b) { return a.vertex < b.vertex; });
    return out;
}

std::vector<VertexWeight> lambda_support(const CubeComplex& complex, const RealVec& x) {
    const auto cubes = complex.containing_cubes(x);
    if (cubes.empty()) throw std::invalid_argument("point lies outside the cube complex");
    return lambda_support_in_cube(complex.scale(), cubes.front(), x);
}

CubeComplex read_complex(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::size_t d = 0;
    double R = 0.0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream hs(line);
        long long dd = 0;
        if (!(hs >> dd)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw std::invalid_argument("complex: header must be \"d R\"");
        }
        if (!(hs >> R) || dd < 1) throw std::invalid_argument("complex: header must be \"d R\"");
        d = static_cast<std::size_t>(dd);
        break;
    }
    if (d == 0) throw std::invalid_argument("complex: missing header line");
    std::vector<IntVec> rows;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        IntVec v;
        long long k = 0;
        while (ls >> k) v.push_back(k);
        if (!ls.eof()) throw std::invalid_argument("complex: bad integer on line " + std::to_string(lineno));
        if (v.empty()) continue;
        if (v.size() != d) {
            throw std::invalid_argument("complex: line " + std::to_string(lineno) + " has " +
                                        std::to_string(v.size()) + " entries, expected " + std::to_string(d));
        }
        rows.push_back(std::move(v));
    }
    if (rows.size() < 2) throw std::invalid_argument("complex: need at least one offset and a base vertex");
    IntVec base = std::move(rows.back());
    rows.pop_back();
    return CubeComplex(d, R, std::move(rows), std::move(base));
}

CubeComplex load_complex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open complex file " + path);
    return read_complex(in);
}

CubeComplex unit_cube_complex(std::size_t d, double R) {
    return CubeComplex(d, R, {IntVec(d, 0)}, IntVec(d, 0));
}

RealVec sample_in_cube(double R, const IntVec& w, Rng& rng, double boundary_rate) {
    RealVec x(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double t = uniform01(rng);
        if (uniform01(rng) < boundary_rate) t = uniform01(rng) < 0.5 ? 0.0 : 1.0;
        x[i] = R * (static_cast<double>(w[i]) + t);
    }
    return x;
}

PartitionCheck check_partition(const CubeComplex& complex, std::size_t n_points, std::uint64_t seed,
                               double boundary_rate) {
    PartitionCheck out;
    out.n_points = n_points;
    out.min_weight = 1.0;
    const std::vector<IntVec> cubes(complex.offsets().begin(), complex.offsets().end());
    Rng rng(seed);
    for (std::size_t s = 0; s < n_points; ++s) {
        const IntVec& w = cubes[uniform_index(rng, cubes.size())];
        const RealVec x = sample_in_cube(complex.scale(), w, rng, boundary_rate);
        double sum = 0.0;
        const auto support = lambda_support(complex, x);
        for (const auto& vw : support) {
            sum += vw.weight;
            out.min_weight = std::min(out.min_weight, vw.weight);
        }
        out.max_support = std::max(out.max_support, support.size());
        out.max_sum_error = std::max(out.max_sum_error, std::abs(sum - 1.0));
    }
    for (const auto& u : complex.vertices()) {
        const RealVec x = complex.vertex_point(u);
        for (const auto& v : complex.vertices()) {
            const double expect = u == v ? 1.0 : 0.0;
            out.max_kronecker_error = std::max(out.max_kronecker_error, std::abs(lambda(complex, v, x) - expect));
        }
    }
    return out;
}

}  // namespace lipfree
