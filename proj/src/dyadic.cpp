#include "lipfree/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace lipfree {

namespace {

constexpr int kMaxLevel = 60;

__int128 scaled(std::int64_t num, int from, int to) {
    return static_cast<__int128>(num) << (to - from);
}

}  // namespace

Dyadic::Dyadic(std::int64_t num, int level) : num_(num), level_(level) {
    if (level_ < 0) {
        // Negative levels denote multiples of 2^{|level|}.
        if (-level_ >= 63) throw std::overflow_error("dyadic exponent too large");
        num_ = num_ * (std::int64_t{1} << -level_);
        level_ = 0;
    }
    if (level_ > kMaxLevel) throw std::overflow_error("dyadic level exceeds 60");
    if (num_ == 0) {
        level_ = 0;
        return;
    }
    while (level_ > 0 && (num_ % 2) == 0) {
        num_ /= 2;
        --level_;
    }
}

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(num_), -level_); }

std::int64_t Dyadic::numerator_at(int level) const {
    if (level < level_) throw std::invalid_argument("numerator_at: level below the dyadic's own level");
    const __int128 v = scaled(num_, level_, level);
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("dyadic numerator overflow");
    return static_cast<std::int64_t>(v);
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    const int l = std::max(level_, o.level_);
    return Dyadic(numerator_at(l) + o.numerator_at(l), l);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + (-o); }

std::strong_ordering Dyadic::operator<=>(const Dyadic& o) const {
    const int l = std::max(level_, o.level_);
    const __int128 a = scaled(num_, level_, l);
    const __int128 b = scaled(o.num_, o.level_, l);
    if (a < b) return std::strong_ordering::less;
    if (a > b) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Dyadic::to_string() const {
    if (level_ == 0) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(std::int64_t{1} << level_);
}

Dyadic mesh(int n) {
    if (n >= 0) return Dyadic(1, n);
    return Dyadic(std::int64_t{1} << -n, 0);
}

int coordinate_level(const Dyadic& x) { return x.level(); }

std::pair<Dyadic, Dyadic> neighbors(const Dyadic& x) {
    if (x.level() < 1) throw std::invalid_argument("integer " + x.to_string() + " has no dyadic neighbors");
    const Dyadic h = mesh(x.level());
    return {x - h, x + h};
}

Dyadic floor_to_level(const Dyadic& x, int n) {
    if (x.level() <= n) return x;
    const int shift = x.level() - n;
    std::int64_t q = x.num() >> shift;  // arithmetic shift floors for negatives
    return Dyadic(q, n);
}

Dyadic parse_dyadic(const std::string& text) {
    auto to_int = [&](const std::string& part) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (part.empty() || used != part.size()) throw std::invalid_argument("not a dyadic rational: '" + text + "'");
        return static_cast<std::int64_t>(v);
    };
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Dyadic::integer(to_int(text));
    const std::int64_t num = to_int(text.substr(0, slash));
    const std::int64_t den = to_int(text.substr(slash + 1));
    if (den <= 0 || (den & (den - 1)) != 0) throw std::invalid_argument("denominator of '" + text + "' is not a power of two");
    int level = 0;
    while ((std::int64_t{1} << level) != den) ++level;
    return Dyadic(num, level);
}

DyadicPoint::DyadicPoint(const std::vector<std::int64_t>& numerators, int level) {
    coords_.reserve(numerators.size());
    for (auto n : numerators) coords_.emplace_back(n, level);
}

int DyadicPoint::level() const {
    int l = 0;
    for (const auto& c : coords_) l = std::max(l, c.level());
    return l;
}

std::vector<std::int64_t> DyadicPoint::numerators() const {
    const int l = level();
    std::vector<std::int64_t> out;
    out.reserve(coords_.size());
    for (const auto& c : coords_) out.push_back(c.numerator_at(l));
    return out;
}

bool DyadicPoint::is_origin() const {
    for (const auto& c : coords_) {
        if (c.num() != 0) return false;
    }
    return true;
}

bool DyadicPoint::in_unit_cube() const {
    const Dyadic zero;
    const Dyadic one = Dyadic::integer(1);
    for (const auto& c : coords_) {
        if (c < zero || c > one) return false;
    }
    return true;
}

std::vector<double> DyadicPoint::to_real() const {
    std::vector<double> out;
    out.reserve(coords_.size());
    for (const auto& c : coords_) out.push_back(c.to_double());
    return out;
}

DyadicPoint DyadicPoint::shifted(std::size_t j, const Dyadic& eps) const {
    auto c = coords_;
    c.at(j) = c.at(j) + eps;
    return DyadicPoint(std::move(c));
}

DyadicPoint DyadicPoint::with(std::size_t j, const Dyadic& value) const {
    auto c = coords_;
    c.at(j) = value;
    return DyadicPoint(std::move(c));
}

DyadicPoint DyadicPoint::project_out(std::size_t j) const {
    if (j >= coords_.size()) throw std::out_of_range("project_out: axis out of range");
    auto c = coords_;
    c.erase(c.begin() + static_cast<std::ptrdiff_t>(j));
    return DyadicPoint(std::move(c));
}

DyadicPoint DyadicPoint::insert(std::size_t j, const Dyadic& value) const {
    if (j > coords_.size()) throw std::out_of_range("insert: axis out of range");
    auto c = coords_;
    c.insert(c.begin() + static_cast<std::ptrdiff_t>(j), value);
    return DyadicPoint(std::move(c));
}

std::string DyadicPoint::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) s += ", ";
        s += coords_[i].to_string();
    }
    return s + ")";
}

Dyadic l1_dyadic(const DyadicPoint& a, const DyadicPoint& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    Dyadic s;
    for (std::size_t i = 0; i < a.dim(); ++i) s = s + (a[i] - b[i]).abs();
    return s;
}

std::vector<DyadicPoint> dyadic_grid(std::size_t d, int k) {
    if (d == 0) throw std::invalid_argument("dyadic_grid requires d >= 1");
    if (k < -1) throw std::invalid_argument("dyadic_grid requires k >= -1");
    if (k == -1) return {DyadicPoint::origin(d)};
    if (k > 30) throw std::overflow_error("dyadic_grid level too large");
    const std::int64_t side = (std::int64_t{1} << k) + 1;
    std::vector<DyadicPoint> out;
    std::vector<std::int64_t> num(d, 0);
    while (true) {
        out.emplace_back(num, k);
        std::size_t i = d;
        while (i > 0) {
            --i;
            if (++num[i] < side) break;
            num[i] = 0;
            if (i == 0) return out;
        }
    }
}

std::vector<double> project_out(const std::vector<double>& x, std::size_t j) {
    if (j >= x.size()) throw std::out_of_range("project_out: axis out of range");
    auto c = x;
    c.erase(c.begin() + static_cast<std::ptrdiff_t>(j));
    return c;
}

std::vector<std::int64_t> extend_last(const std::vector<std::int64_t>& u, std::int64_t last) {
    auto c = u;
    c.push_back(last);
    return c;
}

}  // namespace lipfree
