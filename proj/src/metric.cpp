#include "lipfree/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lipfree {

double l1_distance(const RealVec& a, const RealVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch in l1 distance");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
    return s;
}

std::optional<std::string> find_metric_violation(const std::vector<std::vector<double>>& dist,
                                                 double rel_tol) {
    const std::size_t n = dist.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i].size() != n) return "distance matrix is not square";
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i][i] != 0.0) return "nonzero diagonal at " + std::to_string(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!std::isfinite(dist[i][j])) return "non-finite distance";
            if (dist[i][j] != dist[j][i]) {
                return "asymmetric distance between " + std::to_string(i) + " and " + std::to_string(j);
            }
            if (!(dist[i][j] > 0.0)) {
                return "nonpositive distance between " + std::to_string(i) + " and " + std::to_string(j);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                const double via = dist[i][k] + dist[k][j];
                if (dist[i][j] > via * (1.0 + rel_tol)) {
                    return "triangle inequality fails for (" + std::to_string(i) + ", " +
                           std::to_string(k) + ", " + std::to_string(j) + ")";
                }
            }
        }
    }
    return std::nullopt;
}

PointedFiniteMetric::PointedFiniteMetric(std::vector<std::vector<double>> dist, std::size_t base,
                                         std::vector<RealVec> coords)
    : dist_(std::move(dist)), base_(base), coords_(std::move(coords)) {
    if (dist_.empty()) throw std::invalid_argument("metric space must be nonempty");
    if (base_ >= dist_.size()) throw std::invalid_argument("base index out of range");
    if (!coords_.empty() && coords_.size() != dist_.size()) {
        throw std::invalid_argument("coordinate count does not match point count");
    }
    if (auto bad = find_metric_violation(dist_)) throw std::invalid_argument("not a metric: " + *bad);
}

PointedFiniteMetric::PointedFiniteMetric(TrustedTag, std::vector<std::vector<double>> dist,
                                         std::size_t base, std::vector<RealVec> coords)
    : dist_(std::move(dist)), base_(base), coords_(std::move(coords)) {
    if (dist_.empty()) throw std::invalid_argument("metric space must be nonempty");
    if (base_ >= dist_.size()) throw std::invalid_argument("base index out of range");
    if (!coords_.empty() && coords_.size() != dist_.size()) {
        throw std::invalid_argument("coordinate count does not match point count");
    }
}

std::optional<std::size_t> PointedFiniteMetric::find(const RealVec& x) const {
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] == x) return i;
    }
    return std::nullopt;
}

MetricPtr l1_space(std::vector<RealVec> points, std::size_t base) {
    if (points.empty()) throw std::invalid_argument("point set must be nonempty");
    const std::size_t d = points.front().size();
    std::set<RealVec> seen;
    for (const auto& pt : points) {
        if (pt.size() != d) throw std::invalid_argument("points have mixed dimensions");
        if (!seen.insert(pt).second) throw std::invalid_argument("duplicate point in l1 space");
    }
    const std::size_t n = points.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            dist[i][j] = dist[j][i] = l1_distance(points[i], points[j]);
        }
    }
    return std::make_shared<const PointedFiniteMetric>(PointedFiniteMetric::TrustedTag{}, std::move(dist),
                                                       base, std::move(points));
}

MetricPtr holder_distort(const PointedFiniteMetric& space, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("Hölder exponent must lie in (0, 1]");
    auto dist = space.matrix();
    if (alpha != 1.0) {
        for (auto& row : dist) {
            for (double& x : row) x = std::pow(x, alpha);
        }
    }
    // t -> t^alpha is concave and vanishes at 0, so the result is again a metric.
    return std::make_shared<const PointedFiniteMetric>(PointedFiniteMetric::TrustedTag{}, std::move(dist),
                                                       space.base(), space.all_coords());
}

MetricPtr read_point_set(std::istream& in) {
    std::string line;
    std::size_t d = 0;
    std::size_t base = 0;
    {
        if (!std::getline(in, line)) throw std::invalid_argument("point set: missing header line");
        std::istringstream hs(line);
        long long dd = -1;
        long long bb = -1;
        if (!(hs >> dd >> bb) || dd < 1 || bb < 0) {
            throw std::invalid_argument("point set: header must be \"d base\"");
        }
        d = static_cast<std::size_t>(dd);
        base = static_cast<std::size_t>(bb);
    }
    std::vector<RealVec> points;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        RealVec pt;
        double x = 0.0;
        while (ls >> x) pt.push_back(x);
        if (!ls.eof()) throw std::invalid_argument("point set: bad number on line " + std::to_string(lineno));
        if (pt.empty()) continue;
        if (pt.size() != d) {
            throw std::invalid_argument("point set: line " + std::to_string(lineno) + " has " +
                                        std::to_string(pt.size()) + " coordinates, expected " +
                                        std::to_string(d));
        }
        points.push_back(std::move(pt));
    }
    if (base >= points.size()) throw std::invalid_argument("point set: base index out of range");
    return l1_space(std::move(points), base);
}

MetricPtr load_point_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open point set file " + path);
    return read_point_set(in);
}

}  // namespace lipfree
