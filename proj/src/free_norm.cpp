#include "lipfree/free_norm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lipfree {

FreeElement::FreeElement(MetricPtr host) : host_(std::move(host)) {
    if (!host_) throw std::invalid_argument("free element needs a host space");
}

FreeElement::FreeElement(MetricPtr host, const std::map<std::size_t, double>& weights)
    : FreeElement(std::move(host)) {
    for (const auto& [i, w] : weights) add(i, w);
}

FreeElement FreeElement::delta(MetricPtr host, std::size_t i) {
    FreeElement m(std::move(host));
    m.add(i, 1.0);
    return m;
}

FreeElement FreeElement::difference(MetricPtr host, std::size_t x, std::size_t y) {
    FreeElement m(std::move(host));
    m.add(x, 1.0);
    m.add(y, -1.0);
    return m;
}

double FreeElement::weight(std::size_t i) const {
    auto it = weights_.find(i);
    return it == weights_.end() ? 0.0 : it->second;
}

void FreeElement::add(std::size_t i, double w) {
    if (i >= host_->size()) throw std::out_of_range("point index " + std::to_string(i) + " out of range");
    if (i == host_->base() || w == 0.0) return;
    auto [it, fresh] = weights_.emplace(i, w);
    if (!fresh) {
        it->second += w;
        if (it->second == 0.0) weights_.erase(it);
    }
}

void FreeElement::check_host(const FreeElement& o) const {
    if (host_ != o.host_) throw std::invalid_argument("free elements live over different hosts");
}

FreeElement& FreeElement::operator+=(const FreeElement& o) {
    check_host(o);
    for (const auto& [i, w] : o.weights_) add(i, w);
    return *this;
}

FreeElement& FreeElement::operator-=(const FreeElement& o) {
    check_host(o);
    for (const auto& [i, w] : o.weights_) add(i, -w);
    return *this;
}

FreeElement FreeElement::operator+(const FreeElement& o) const {
    FreeElement r = *this;
    r += o;
    return r;
}

FreeElement FreeElement::operator-(const FreeElement& o) const {
    FreeElement r = *this;
    r -= o;
    return r;
}

FreeElement FreeElement::operator*(double s) const {
    FreeElement r(host_);
    for (const auto& [i, w] : weights_) r.add(i, w * s);
    return r;
}

double FreeElement::max_abs_diff(const FreeElement& o) const {
    check_host(o);
    double worst = 0.0;
    for (const auto& [i, w] : weights_) worst = std::max(worst, std::abs(w - o.weight(i)));
    for (const auto& [i, w] : o.weights_) {
        if (!weights_.count(i)) worst = std::max(worst, std::abs(w));
    }
    return worst;
}

double FreeElement::max_abs() const {
    double worst = 0.0;
    for (const auto& [i, w] : weights_) worst = std::max(worst, std::abs(w));
    return worst;
}

void FreeElement::prune(double tol) {
    std::erase_if(weights_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

void Decomposition::canonicalize(double tol) {
    std::map<Molecule, double> merged;
    for (const auto& t : terms) {
        if (t.m.x == t.m.y) throw std::invalid_argument("degenerate molecule with equal endpoints");
        if (t.m.x < t.m.y) merged[t.m] += t.a;
        else merged[{t.m.y, t.m.x}] -= t.a;
    }
    terms.clear();
    for (const auto& [m, a] : merged) {
        if (std::abs(a) > tol) terms.push_back({a, m});
    }
}

FreeElement evaluate(const Decomposition& decomp) {
    FreeElement out(decomp.host);
    const auto& host = *decomp.host;
    for (const auto& t : decomp.terms) {
        if (t.m.x >= host.size() || t.m.y >= host.size()) throw std::out_of_range("molecule endpoint out of range");
        if (t.m.x == t.m.y) throw std::invalid_argument("degenerate molecule with equal endpoints");
        const double c = t.a / host.dist(t.m.x, t.m.y);
        out.add(t.m.x, c);
        out.add(t.m.y, -c);
    }
    return out;
}

double p_cost(const std::vector<double>& coeffs, PExponent p) {
    const double pv = p.value();
    double s = 0.0;
    if (pv == 1.0) {
        for (double a : coeffs) s += std::abs(a);
        return s;
    }
    for (double a : coeffs) {
        if (a != 0.0) s += std::pow(std::abs(a), pv);
    }
    return std::pow(s, 1.0 / pv);
}

double p_cost(const Decomposition& decomp, PExponent p) {
    std::vector<double> c;
    c.reserve(decomp.terms.size());
    for (const auto& t : decomp.terms) c.push_back(t.a);
    return p_cost(c, p);
}

NormResult exact_norm_p1(const FreeElement& m) {
    const auto& host = *m.host();
    const std::size_t n = host.size();
    const std::size_t base = host.base();
    Decomposition witness{m.host(), {}};
    if (m.is_zero()) return {0.0, witness};

    std::vector<double> excess(n, 0.0);
    double total = 0.0;
    for (const auto& [i, w] : m.weights()) {
        excess[i] = w;
        total += w;
    }
    excess[base] = -total;
    const double eps = 1e-14 * std::max(1.0, m.max_abs() * static_cast<double>(n));
    for (double& e : excess) {
        if (std::abs(e) <= eps) e = 0.0;
    }

    std::vector<std::vector<double>> flow(n, std::vector<double>(n, 0.0));
    std::vector<double> pot(n, 0.0);
    const double inf = std::numeric_limits<double>::infinity();

    // Successive shortest paths with Dijkstra on reduced costs.
    for (std::size_t iter = 0; iter < 4 * n * n + 16; ++iter) {
        bool any_source = false;
        for (double e : excess) any_source = any_source || e > 0.0;
        if (!any_source) break;

        std::vector<double> dist(n, inf);
        std::vector<std::ptrdiff_t> pred(n, -1);
        std::vector<char> done(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (excess[i] > 0.0) dist[i] = 0.0;
        }
        for (std::size_t round = 0; round < n; ++round) {
            std::size_t u = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (!done[i] && dist[i] < inf && (u == n || dist[i] < dist[u])) u = i;
            }
            if (u == n) break;
            done[u] = 1;
            for (std::size_t v = 0; v < n; ++v) {
                if (v == u || done[v]) continue;
                // Forward arc (unbounded) and cancelling arc (if v sends flow to u).
                double c = host.dist(u, v);
                if (flow[v][u] > 0.0) c = -host.dist(v, u);
                const double reduced = std::max(0.0, c + pot[u] - pot[v]);
                if (dist[u] + reduced < dist[v]) {
                    dist[v] = dist[u] + reduced;
                    pred[v] = static_cast<std::ptrdiff_t>(u);
                }
            }
        }
        std::size_t sink = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (excess[i] < 0.0 && dist[i] < inf && (sink == n || dist[i] < dist[sink])) sink = i;
        }
        if (sink == n) throw std::logic_error("transshipment: no augmenting path");
        for (std::size_t i = 0; i < n; ++i) {
            if (dist[i] < inf) pot[i] += dist[i];
        }

        double amount = -excess[sink];
        std::size_t v = sink;
        while (pred[v] >= 0) {
            const auto u = static_cast<std::size_t>(pred[v]);
            if (flow[v][u] > 0.0) amount = std::min(amount, flow[v][u]);
            v = u;
        }
        amount = std::min(amount, excess[v]);
        const std::size_t source = v;

        v = sink;
        while (pred[v] >= 0) {
            const auto u = static_cast<std::size_t>(pred[v]);
            if (flow[v][u] > 0.0) {
                flow[v][u] -= amount;
                if (flow[v][u] <= eps) flow[v][u] = 0.0;
            } else {
                flow[u][v] += amount;
            }
            v = u;
        }
        excess[source] -= amount;
        excess[sink] += amount;
        if (std::abs(excess[source]) <= eps) excess[source] = 0.0;
        if (std::abs(excess[sink]) <= eps) excess[sink] = 0.0;
    }

    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (flow[i][j] > 0.0) {
                const double a = flow[i][j] * host.dist(i, j);
                value += a;
                witness.terms.push_back({a, {i, j}});
            }
        }
    }
    witness.canonicalize();
    return {value, witness};
}

namespace {

// Solves the rows x k system A c = b by elimination with partial pivoting.
// Returns false when the columns are dependent or the system is inconsistent.
bool solve_columns(std::vector<std::vector<double>>& a, std::vector<double>& b, std::size_t k,
                   std::vector<double>& sol) {
    const std::size_t rows = a.size();
    double scale = 0.0;
    for (const auto& r : a) {
        for (std::size_t j = 0; j < k; ++j) scale = std::max(scale, std::abs(r[j]));
    }
    if (scale == 0.0) return false;
    const double tol = 1e-10 * scale;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < rows; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (std::abs(a[piv][col]) <= tol) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < rows; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < k; ++j) a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }
    double bscale = 0.0;
    for (double x : b) bscale = std::max(bscale, std::abs(x));
    for (std::size_t r = k; r < rows; ++r) {
        if (std::abs(b[r]) > 1e-9 * std::max(1.0, bscale)) return false;
    }
    sol.assign(k, 0.0);
    for (std::size_t c = k; c-- > 0;) {
        double s = b[c];
        for (std::size_t j = c + 1; j < k; ++j) s -= a[c][j] * sol[j];
        sol[c] = s / a[c][c];
    }
    return true;
}

NormResult enumerate_norm(const FreeElement& m, PExponent p, const std::vector<std::size_t>& pts) {
    const auto& host = *m.host();
    const std::size_t base = host.base();
    Decomposition best_witness{m.host(), {}};
    if (m.is_zero()) return {0.0, best_witness};

    std::vector<std::size_t> rows;
    for (auto i : pts) {
        if (i != base) rows.push_back(i);
    }
    std::vector<std::size_t> row_of(host.size(), host.size());
    for (std::size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = r;

    std::vector<Molecule> pairs;
    for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b = a + 1; b < pts.size(); ++b) pairs.push_back({pts[a], pts[b]});
    }
    const std::size_t k = pts.size() - 1;
    const double inf = std::numeric_limits<double>::infinity();
    if (k == 0 || pairs.size() < k) return {inf, best_witness};

    std::vector<double> rhs(rows.size(), 0.0);
    for (const auto& [i, w] : m.weights()) rhs[row_of[i]] = w;

    const double pv = p.value();
    double best = inf;
    std::vector<double> best_sol;
    std::vector<std::size_t> best_cols;

    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::vector<std::vector<double>> a(rows.size(), std::vector<double>(k));
    std::vector<double> b;
    std::vector<double> sol;
    while (true) {
        for (auto& r : a) std::fill(r.begin(), r.end(), 0.0);
        for (std::size_t c = 0; c < k; ++c) {
            const auto& mol = pairs[idx[c]];
            const double inv = 1.0 / host.dist(mol.x, mol.y);
            if (mol.x != base) a[row_of[mol.x]][c] = inv;
            if (mol.y != base) a[row_of[mol.y]][c] = -inv;
        }
        b = rhs;
        if (solve_columns(a, b, k, sol)) {
            double amax = 0.0;
            for (double x : sol) amax = std::max(amax, std::abs(x));
            double cost = 0.0;
            for (double& x : sol) {
                if (std::abs(x) < 1e-12 * amax) x = 0.0;
                if (x != 0.0) cost += pv == 1.0 ? std::abs(x) : std::pow(std::abs(x), pv);
            }
            if (cost < best * (1.0 - 1e-12)) {
                best = cost;
                best_sol = sol;
                best_cols = idx;
            }
        }
        // Next k-combination in lexicographic order.
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == pairs.size() - k + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (best == inf) return {inf, best_witness};
    for (std::size_t c = 0; c < k; ++c) {
        if (best_sol[c] != 0.0) best_witness.terms.push_back({best_sol[c], pairs[best_cols[c]]});
    }
    best_witness.canonicalize();
    return {pv == 1.0 ? best : std::pow(best, 1.0 / pv), best_witness};
}

}  // namespace

NormResult exact_norm_small(const FreeElement& m, PExponent p, std::size_t cap) {
    const std::size_t n = m.host()->size();
    if (n > cap) {
        throw std::length_error("exact norm enumeration is capped at " + std::to_string(cap) +
                                " points (host has " + std::to_string(n) + "); use the bounds instead");
    }
    std::vector<std::size_t> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = i;
    return enumerate_norm(m, p, pts);
}

NormResult restricted_norm(const FreeElement& m, PExponent p, const std::set<std::size_t>& subset, std::size_t cap) {
    if (subset.size() > cap) {
        throw std::length_error("restricted norm enumeration is capped at " + std::to_string(cap) + " points");
    }
    for (auto i : subset) {
        if (i >= m.host()->size()) throw std::out_of_range("subset index out of range");
    }
    for (const auto& [i, w] : m.weights()) {
        if (!subset.count(i)) throw std::invalid_argument("support point " + std::to_string(i) + " lies outside the subset");
    }
    return enumerate_norm(m, p, std::vector<std::size_t>(subset.begin(), subset.end()));
}

void validate_certificate(const PointedFiniteMetric& host, const DualCertificate& cert) {
    const std::size_t n = host.size();
    if (cert.kappa == 0) throw std::invalid_argument("certificate: multiplicity must be positive");
    if (cert.activity.size() != cert.functions.size()) {
        throw std::invalid_argument("certificate: one activity set per function required");
    }
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> uses;
    for (std::size_t u = 0; u < cert.functions.size(); ++u) {
        const auto& phi = cert.functions[u];
        const std::string tag = "certificate function " + std::to_string(u);
        if (phi.size() != n) throw std::invalid_argument(tag + ": wrong number of values");
        double fscale = 0.0;
        for (double v : phi) fscale = std::max(fscale, std::abs(v));
        if (std::abs(phi[host.base()]) > 1e-12 * std::max(1.0, fscale)) {
            throw std::invalid_argument(tag + ": does not vanish at the base point");
        }
        for (const auto& pr : cert.activity[u]) {
            if (pr.first >= pr.second || pr.second >= n) throw std::invalid_argument(tag + ": malformed activity pair");
            if (++uses[pr] > cert.kappa) {
                throw std::invalid_argument("certificate: pair (" + std::to_string(pr.first) + ", " +
                                            std::to_string(pr.second) + ") active for more than kappa functions");
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double diff = std::abs(phi[i] - phi[j]);
                if (diff > host.dist(i, j) * (1.0 + 1e-12)) {
                    throw std::invalid_argument(tag + ": Lipschitz constant exceeds 1 on pair (" + std::to_string(i) +
                                                ", " + std::to_string(j) + ")");
                }
                if (!cert.activity[u].count({i, j}) && diff > 1e-12 * std::max(1.0, fscale)) {
                    throw std::invalid_argument(tag + ": does not annihilate inactive molecule (" + std::to_string(i) +
                                                ", " + std::to_string(j) + ")");
                }
            }
        }
    }
}

double dual_lower_bound(const FreeElement& m, PExponent p, const DualCertificate& cert) {
    validate_certificate(*m.host(), cert);
    std::vector<double> pairings;
    for (const auto& phi : cert.functions) {
        double s = 0.0;
        for (const auto& [i, w] : m.weights()) s += w * phi[i];
        pairings.push_back(s);
    }
    const double pv = p.value();
    double s = 0.0;
    for (double x : pairings) {
        if (x != 0.0) s += std::pow(std::abs(x), pv);
    }
    return std::pow(s / static_cast<double>(cert.kappa), 1.0 / pv);
}

double upper_bound_from(const FreeElement& m, PExponent p, const Decomposition& decomp, double tol) {
    if (decomp.host != m.host()) throw std::invalid_argument("decomposition and element live over different hosts");
    const double residual = evaluate(decomp).max_abs_diff(m);
    if (!(residual <= tol)) {
        std::ostringstream os;
        os.precision(17);
        os << "decomposition does not evaluate to the element: max coordinate residual " << residual;
        throw std::invalid_argument(os.str());
    }
    return p_cost(decomp, p);
}

namespace {

bool skippable(const std::string& line) {
    const auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '#';
}

std::size_t parse_index(const std::string& tok, std::size_t n, std::size_t lineno) {
    std::size_t used = 0;
    long long v = -1;
    try {
        v = std::stoll(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size() || v < 0) throw std::invalid_argument("line " + std::to_string(lineno) + ": bad point index");
    if (static_cast<std::size_t>(v) >= n) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": point index out of range");
    }
    return static_cast<std::size_t>(v);
}

double parse_real(const std::string& tok, std::size_t lineno) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size() || !std::isfinite(v)) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": bad number '" + tok + "'");
    }
    return v;
}

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream ls(line);
    std::vector<std::string> out;
    std::string t;
    while (ls >> t) out.push_back(t);
    return out;
}

}  // namespace

FreeElement read_element(std::istream& in, MetricPtr host) {
    FreeElement m(host);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        const auto t = tokens(line);
        if (t.size() != 2) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected \"w index\"");
        m.add(parse_index(t[1], host->size(), lineno), parse_real(t[0], lineno));
    }
    return m;
}

Decomposition read_decomposition(std::istream& in, MetricPtr host) {
    Decomposition dec{host, {}};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        const auto t = tokens(line);
        if (t.size() != 3) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected \"a x y\"");
        const double a = parse_real(t[0], lineno);
        const auto x = parse_index(t[1], host->size(), lineno);
        const auto y = parse_index(t[2], host->size(), lineno);
        if (x == y) throw std::invalid_argument("line " + std::to_string(lineno) + ": molecule endpoints coincide");
        dec.terms.push_back({a, {x, y}});
    }
    return dec;
}

void write_element(std::ostream& out, const FreeElement& m) {
    const auto old = out.precision(17);
    for (const auto& [i, w] : m.weights()) out << w << ' ' << i << '\n';
    out.precision(old);
}

void write_decomposition(std::ostream& out, const Decomposition& decomp) {
    const auto old = out.precision(17);
    for (const auto& t : decomp.terms) out << t.a << ' ' << t.m.x << ' ' << t.m.y << '\n';
    out.precision(old);
}

}  // namespace lipfree
