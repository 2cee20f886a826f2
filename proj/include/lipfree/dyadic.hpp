#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lipfree {

/// Exact dyadic rational num * 2^{-level}, kept canonical: level is minimal,
/// so either num is odd or level == 0.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(std::int64_t num, int level);
    static Dyadic integer(std::int64_t n) { return Dyadic(n, 0); }

    std::int64_t num() const { return num_; }
    int level() const { return level_; }
    double to_double() const;

    /// Numerator when written at `level` (which must be >= this->level()).
    std::int64_t numerator_at(int level) const;

    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-(const Dyadic& o) const;
    Dyadic operator-() const { return Dyadic(-num_, level_); }
    Dyadic abs() const { return Dyadic(num_ < 0 ? -num_ : num_, level_); }

    bool operator==(const Dyadic& o) const = default;
    std::strong_ordering operator<=>(const Dyadic& o) const;

    std::string to_string() const;

private:
    std::int64_t num_ = 0;
    int level_ = 0;
};

/// 2^{-n}.
Dyadic mesh(int n);

/// The unique n >= 0 with x in 2^{-n}Z \ 2^{-n+1}Z (0 for integers).
int coordinate_level(const Dyadic& x);

/// (x - 2^{-n}, x + 2^{-n}) for x at exact level n >= 1.
/// Throws std::invalid_argument when x is an integer.
std::pair<Dyadic, Dyadic> neighbors(const Dyadic& x);

/// Largest multiple of 2^{-n} that is <= x.
Dyadic floor_to_level(const Dyadic& x, int n);

/// "a" or "a/b" with b a power of two. Throws std::invalid_argument.
Dyadic parse_dyadic(const std::string& text);

/// A point of R^d with dyadic coordinates. The common level is the least k
/// with the point in 2^{-k}Z^d.
class DyadicPoint {
public:
    DyadicPoint() = default;
    explicit DyadicPoint(std::vector<Dyadic> coords) : coords_(std::move(coords)) {}
    /// From integer numerators at a common level.
    DyadicPoint(const std::vector<std::int64_t>& numerators, int level);
    static DyadicPoint origin(std::size_t d) { return DyadicPoint(std::vector<Dyadic>(d)); }

    std::size_t dim() const { return coords_.size(); }
    const Dyadic& operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<Dyadic>& coords() const { return coords_; }

    int level() const;
    std::vector<std::int64_t> numerators() const;
    bool is_origin() const;
    bool in_unit_cube() const;
    std::vector<double> to_real() const;

    /// x^j_eps: shift coordinate j by eps.
    DyadicPoint shifted(std::size_t j, const Dyadic& eps) const;
    /// Copy with coordinate j replaced.
    DyadicPoint with(std::size_t j, const Dyadic& value) const;
    /// pi_j: drop coordinate j.
    DyadicPoint project_out(std::size_t j) const;
    /// Inverse of project_out: insert `value` as coordinate j (the delta^j_x
    /// embedding of a coordinate line).
    DyadicPoint insert(std::size_t j, const Dyadic& value) const;

    bool operator==(const DyadicPoint& o) const = default;
    auto operator<=>(const DyadicPoint& o) const = default;

    std::string to_string() const;

private:
    std::vector<Dyadic> coords_;
};

/// |a - b|_1 as an exact dyadic.
Dyadic l1_dyadic(const DyadicPoint& a, const DyadicPoint& b);

/// Least k with v in V_k.
inline int level_of(const DyadicPoint& v) { return v.level(); }

/// V_k = [0,1]^d ∩ 2^{-k}Z^d for k >= 0; V_{-1} = {0}. Ordered lexicographically
/// by numerators.
std::vector<DyadicPoint> dyadic_grid(std::size_t d, int k);

/// Real-vector helpers matching the DyadicPoint ones.
std::vector<double> project_out(const std::vector<double>& x, std::size_t j);
/// u^0 / u^1: extend a (d-1)-vector by a last coordinate 0 or 1.
std::vector<std::int64_t> extend_last(const std::vector<std::int64_t>& u, std::int64_t last);

}  // namespace lipfree
