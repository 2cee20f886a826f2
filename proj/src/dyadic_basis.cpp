#include "lipfree/dyadic_basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lipfree {

namespace {

double pow2(double e) { return std::exp2(e); }

double l1_alpha(const DyadicPoint& a, const DyadicPoint& b, double alpha) {
    return std::pow(l1_dyadic(a, b).to_double(), alpha);
}

void require_unit_cube(const DyadicPoint& v, const char* what) {
    if (!v.in_unit_cube()) throw std::invalid_argument(std::string(what) + " " + v.to_string() + " lies outside [0,1]^d");
}

Dyadic ceil_to_level(const Dyadic& x, int n) { return -floor_to_level(-x, n); }

}  // namespace

void add_delta(DyadicElement& m, const DyadicPoint& y, double w) {
    if (w == 0.0 || y.is_origin()) return;
    auto [it, fresh] = m.emplace(y, w);
    if (!fresh) {
        it->second += w;
        if (it->second == 0.0) m.erase(it);
    }
}

void add_scaled(DyadicElement& m, const DyadicElement& other, double s) {
    for (const auto& [y, w] : other) add_delta(m, y, w * s);
}

double max_abs_diff(const DyadicElement& a, const DyadicElement& b) {
    double worst = 0.0;
    for (const auto& [y, w] : a) {
        auto it = b.find(y);
        worst = std::max(worst, std::abs(w - (it == b.end() ? 0.0 : it->second)));
    }
    for (const auto& [y, w] : b) {
        if (!a.count(y)) worst = std::max(worst, std::abs(w));
    }
    return worst;
}

DyadicElement molecule_element(const DyadicPoint& u, const DyadicPoint& v, HolderExponent alpha) {
    if (u == v) throw std::invalid_argument("molecule endpoints coincide");
    const double s = 1.0 / l1_alpha(u, v, alpha.value());
    DyadicElement m;
    add_delta(m, u, s);
    add_delta(m, v, -s);
    return m;
}

DyadicElement step_target(const DyadicPoint& v, std::size_t i, HolderExponent alpha) {
    if (i >= v.dim()) throw std::invalid_argument("axis out of range");
    const int n = v[i].level();
    if (n < 1) throw std::invalid_argument("step target needs a non-integer coordinate");
    const double s = pow2(n * alpha.value());
    const Dyadic h = mesh(n);
    DyadicElement m;
    add_delta(m, v, s);
    add_delta(m, v.shifted(i, h), -0.5 * s);
    add_delta(m, v.shifted(i, -h), -0.5 * s);
    return m;
}

void BasisCombination::add(const DyadicPoint& v, double c) {
    if (c == 0.0) return;
    if (v.is_origin()) throw std::invalid_argument("the origin is not a basis index");
    auto [it, fresh] = coeffs_.emplace(v, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0.0) coeffs_.erase(it);
    }
}

void BasisCombination::add(const BasisCombination& o, double s) {
    if (s == 0.0) return;
    for (const auto& [v, c] : o.coeffs_) add(v, c * s);
}

double BasisCombination::coeff(const DyadicPoint& v) const {
    auto it = coeffs_.find(v);
    return it == coeffs_.end() ? 0.0 : it->second;
}

double BasisCombination::cost(PExponent p) const {
    std::vector<double> c;
    c.reserve(coeffs_.size());
    for (const auto& [v, a] : coeffs_) c.push_back(a);
    return p_cost(c, p);
}

void BasisCombination::prune(double tol) {
    std::erase_if(coeffs_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

DyadicElement basis_element(const DyadicPoint& v, HolderExponent alpha) {
    if (v.is_origin()) throw std::invalid_argument("the origin is not a basis index");
    require_unit_cube(v, "basis index");
    const int k = v.level();
    DyadicElement m;
    if (k == 0) {
        add_delta(m, v, 1.0);
        return m;
    }
    const double s = pow2(k * alpha.value());
    add_delta(m, v, s);
    const Dyadic h = mesh(k);
    const std::size_t d = v.dim();
    // Lambda_{2^{-k+1}}(., v): each coordinate at level k splits evenly between
    // its two neighbours, the others stay put.
    std::vector<std::vector<std::pair<Dyadic, double>>> choices(d);
    for (std::size_t j = 0; j < d; ++j) {
        if (v[j].level() == k) choices[j] = {{v[j] - h, 0.5}, {v[j] + h, 0.5}};
        else choices[j] = {{v[j], 1.0}};
    }
    std::vector<Dyadic> u(d);
    auto rec = [&](auto&& self, std::size_t j, double w) -> void {
        if (j == d) {
            add_delta(m, DyadicPoint(u), -s * w);
            return;
        }
        for (const auto& [c, cw] : choices[j]) {
            u[j] = c;
            self(self, j + 1, w * cw);
        }
    };
    rec(rec, 0, 1.0);
    return m;
}

DyadicElement basis_element(const DyadicPoint& v, int k, HolderExponent alpha) {
    if (!v.is_origin() && v.level() != k) {
        throw std::invalid_argument("stale basis index: " + v.to_string() + " has level " + std::to_string(v.level()) +
                                    ", not " + std::to_string(k));
    }
    return basis_element(v, alpha);
}

DyadicElement synthesize(const BasisCombination& c, HolderExponent alpha) {
    DyadicElement m;
    for (const auto& [v, a] : c.coeffs()) add_scaled(m, basis_element(v, alpha), a);
    return m;
}

BasisCombination analyze(const DyadicElement& m_in, HolderExponent alpha) {
    DyadicElement m = m_in;
    for (const auto& [y, w] : m) require_unit_cube(y, "support point");
    BasisCombination out;
    while (!m.empty()) {
        int top = 0;
        for (const auto& [y, w] : m) top = std::max(top, y.level());
        std::vector<std::pair<DyadicPoint, double>> layer;
        for (const auto& [y, w] : m) {
            if (y.level() == top) layer.emplace_back(y, w);
        }
        const double scale = pow2(top * alpha.value());
        for (const auto& [y, w] : layer) {
            const double c = w / scale;
            out.add(y, c);
            add_scaled(m, basis_element(y, alpha), -c);
            m.erase(y);
        }
    }
    return out;
}

DyadicHost make_dyadic_host(std::size_t d, const std::vector<DyadicPoint>& points, HolderExponent alpha) {
    std::set<DyadicPoint> uniq(points.begin(), points.end());
    uniq.erase(DyadicPoint::origin(d));
    DyadicHost host;
    std::vector<RealVec> coords;
    coords.push_back(RealVec(d, 0.0));
    host.index.emplace(DyadicPoint::origin(d), 0);
    for (const auto& y : uniq) {
        if (y.dim() != d) throw std::invalid_argument("dyadic point has wrong dimension");
        host.index.emplace(y, coords.size());
        coords.push_back(y.to_real());
    }
    host.space = holder_distort(*l1_space(std::move(coords), 0), alpha.value());
    return host;
}

FreeElement to_free(const DyadicHost& host, const DyadicElement& m) {
    FreeElement out(host.space);
    for (const auto& [y, w] : m) {
        auto it = host.index.find(y);
        if (it == host.index.end()) throw std::invalid_argument("point " + y.to_string() + " is not in the host");
        out.add(it->second, w);
    }
    return out;
}

BasisNormCheck basis_norm_check(const DyadicPoint& v, HolderExponent alpha, PExponent p, std::size_t cap) {
    const std::size_t d = v.dim();
    const double a = alpha.value();
    const double bound = std::pow(static_cast<double>(d), a) * c_const(p, std::uint64_t{1} << d);
    const DyadicElement e = basis_element(v, alpha);
    const int k = v.level();
    if (k == 0) {
        // delta is an isometry
        return {std::pow(l1_dyadic(v, DyadicPoint::origin(d)).to_double(), a), true, bound};
    }
    if (e.size() + 1 <= cap) {
        std::vector<DyadicPoint> pts;
        for (const auto& [y, w] : e) pts.push_back(y);
        const auto host = make_dyadic_host(d, pts, alpha);
        return {exact_norm_small(to_free(host, e), p, cap).value, true, bound};
    }
    // iota(e_v) = sum_u 2^{k alpha} Lambda(u, v) (delta(v) - delta(u)).
    const double s = pow2(k * a);
    std::vector<double> coeffs;
    for (const auto& [y, w] : e) {
        if (y == v) continue;
        coeffs.push_back(-w * l1_alpha(v, y, a));
    }
    // The origin carries weight too but is not stored in e.
    double origin_weight = 0.0;
    for (const auto& [y, w] : e) origin_weight -= w;
    if (std::abs(origin_weight) > 1e-15 * s) coeffs.push_back(origin_weight * l1_alpha(v, DyadicPoint::origin(d), a));
    return {p_cost(coeffs, p), false, bound};
}

HatResult hat_decompose(const Dyadic& u1, const Dyadic& u2, const Dyadic& v, HolderExponent alpha) {
    const Dyadic gap = u2 - u1;
    if (gap.num() != 1) throw std::invalid_argument("hat endpoints must be 2^{-n} apart");
    const int n = gap.level();
    if (u1.level() > n || u1 < Dyadic() || u2 > Dyadic::integer(1)) {
        throw std::invalid_argument("hat endpoints must be consecutive points of 2^{-n}Z in [0,1]");
    }
    if (v < u1 || v > u2) throw std::invalid_argument("hat point " + v.to_string() + " lies outside [u1, u2]");
    const double a = alpha.value();

    struct Partial {
        double mu1;
        double mu2;
        std::map<Dyadic, std::pair<double, int>> nu;
    };
    std::map<Dyadic, Partial> memo;
    auto rec = [&](auto&& self, const Dyadic& x) -> const Partial& {
        if (auto it = memo.find(x); it != memo.end()) return it->second;
        Partial out{0.0, 0.0, {}};
        if (x == u1) {
            out.mu1 = 1.0;
        } else if (x == u2) {
            out.mu2 = 1.0;
        } else {
            const int k = x.level();
            const auto [lo, hi] = neighbors(x);
            const Partial& A = self(self, lo);
            const Partial& B = self(self, hi);
            out.mu1 = 0.5 * (A.mu1 + B.mu1);
            out.mu2 = 0.5 * (A.mu2 + B.mu2);
            for (const Partial* P : {&A, &B}) {
                for (const auto& [y, nl] : P->nu) {
                    auto [it, fresh] = out.nu.emplace(y, std::make_pair(0.5 * nl.first, nl.second));
                    if (!fresh) it->second.first += 0.5 * nl.first;
                }
            }
            out.nu[x] = {pow2((n - k) * a), k};
        }
        return memo.emplace(x, std::move(out)).first->second;
    };
    const Partial& P = rec(rec, v);
    HatResult res{P.mu1, P.mu2, {}};
    for (const auto& [y, nl] : P.nu) res.terms.push_back({nl.first, nl.second, y});
    std::stable_sort(res.terms.begin(), res.terms.end(),
                     [](const HatTerm& x, const HatTerm& y) { return x.level < y.level; });
    return res;
}

double hat_residual(const Dyadic& u1, const Dyadic& u2, const Dyadic& v, const HatResult& h, HolderExponent alpha) {
    const int n = (u2 - u1).level();
    const double a = alpha.value();
    std::map<Dyadic, double> diff;
    const double s = pow2(n * a);
    diff[v] += s;
    diff[u1] -= h.mu1 * s;
    diff[u2] -= h.mu2 * s;
    for (const auto& t : h.terms) {
        const double c = t.nu * pow2(t.level * a);
        const auto [lo, hi] = neighbors(t.v);
        diff[t.v] -= c;
        diff[lo] += 0.5 * c;
        diff[hi] += 0.5 * c;
    }
    double worst = 0.0;
    for (const auto& [y, w] : diff) worst = std::max(worst, std::abs(w));
    return worst;
}

std::vector<Dyadic> line_path(const Dyadic& u, const Dyadic& v) {
    if (u == v) throw std::invalid_argument("line path needs distinct endpoints");
    if (v < u) {
        auto path = line_path(v, u);
        std::reverse(path.begin(), path.end());
        return path;
    }
    const Dyadic zero;
    const Dyadic one = Dyadic::integer(1);
    if (u < zero || v > one) throw std::invalid_argument("line path endpoints must lie in [0,1]");
    const int n = std::max(u.level(), v.level());

    int n0 = 0;
    Dyadic seed;
    if (u == zero) {
        n0 = -1;
        seed = zero;
    } else if (v == one) {
        n0 = 0;
        seed = one;
    } else {
        for (n0 = 1; n0 <= n; ++n0) {
            const Dyadic c = ceil_to_level(u, n0);
            if (c <= v) {
                seed = c;
                break;
            }
        }
    }
    std::vector<Dyadic> pts{seed};
    Dyadic lo = seed;
    Dyadic hi = seed;
    for (int i = n0 + 1; i <= n; ++i) {
        const Dyadic h = mesh(i);
        std::vector<Dyadic> fresh;
        for (Dyadic x = ceil_to_level(u, i); x < lo; x = x + h) fresh.push_back(x);
        for (Dyadic x = floor_to_level(hi, i) + h; x <= v; x = x + h) {
            if (x > hi) fresh.push_back(x);
        }
        for (const auto& x : fresh) {
            pts.push_back(x);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double path_cost(const std::vector<Dyadic>& path, HolderExponent alpha, PExponent p) {
    if (path.size() < 2) throw std::invalid_argument("path needs two points");
    const double pa = p.value() * alpha.value();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        s += std::pow((path[i + 1] - path[i]).abs().to_double(), pa);
    }
    const double span = (path.back() - path.front()).abs().to_double();
    return std::pow(s, 1.0 / p.value()) / std::pow(span, alpha.value());
}

LineExpansion line_expansion(const Dyadic& a, const Dyadic& b, HolderExponent alpha) {
    const Dyadic gap = (a - b).abs();
    if (gap.num() != 1) throw std::invalid_argument("line molecule endpoints must be mesh-adjacent");
    const int n = gap.level();
    if (a.level() > n || b.level() > n) throw std::invalid_argument("line molecule endpoints must be mesh-adjacent");
    LineExpansion out;
    if (n == 0) {
        out.edge = a == Dyadic::integer(1) ? 1.0 : -1.0;
        return out;
    }
    const Dyadic& w = a.level() == n ? a : b;
    const Dyadic& other = a.level() == n ? b : a;
    const double s = other > w ? 1.0 : -1.0;
    const double sigma = a == w ? 1.0 : -1.0;
    out.steps.emplace_back(sigma, w);
    const auto [lo, hi] = neighbors(w);
    const LineExpansion sub = line_expansion(hi, lo, alpha);
    const double f = -sigma * s * pow2(alpha.value() - 1.0);
    for (const auto& [c, x] : sub.steps) out.steps.emplace_back(f * c, x);
    out.edge = f * sub.edge;
    return out;
}

DyadicBasis::DyadicBasis(std::size_t d, HolderExponent alpha) : d_(d), alpha_(alpha) {
    if (d == 0) throw std::invalid_argument("dimension must be positive");
}

double DyadicBasis::pow_alpha(double x) const { return std::pow(x, alpha_.value()); }

const BasisCombination& DyadicBasis::step(const DyadicPoint& v, std::size_t i) {
    const auto key = std::make_pair(v, i);
    if (auto it = step_memo_.find(key); it != step_memo_.end()) return it->second;
    if (v.dim() != d_ || i >= d_) throw std::invalid_argument("step index has wrong dimension");
    require_unit_cube(v, "step point");
    const int n = v[i].level();
    if (n < 1) throw std::invalid_argument("step coordinate must lie off the integer lattice");
    const Dyadic h = mesh(n);

    BasisCombination c;
    std::size_t j = d_;
    for (std::size_t k = 0; k < d_; ++k) {
        if (k != i && v[k].level() > n) {
            j = k;
            break;
        }
    }
    if (j == d_) {
        c.add(v, 1.0);
        for (const DyadicPoint& w : {v.shifted(i, h), v.shifted(i, -h)}) {
            if (w.level() == n) c.add(w, -0.5);
        }
    } else {
        const Dyadic u1 = floor_to_level(v[j], n);
        const Dyadic u2 = u1 + h;
        const HatResult hat = hat_decompose(u1, u2, v[j], alpha_);
        if (hat.mu1 != 0.0) c.add(step(v.with(j, u1), i), hat.mu1);
        if (hat.mu2 != 0.0) c.add(step(v.with(j, u2), i), hat.mu2);
        const DyadicPoint up = v.shifted(i, h);
        const DyadicPoint down = v.shifted(i, -h);
        for (const auto& t : hat.terms) {
            c.add(step(v.with(j, t.v), j), t.nu);
            c.add(step(up.with(j, t.v), j), -0.5 * t.nu);
            c.add(step(down.with(j, t.v), j), -0.5 * t.nu);
        }
    }
    return step_memo_.emplace(key, std::move(c)).first->second;
}

const BasisCombination& DyadicBasis::point(const DyadicPoint& y, const std::vector<bool>& fixed) {
    const auto key = std::make_pair(y, fixed);
    if (auto it = point_memo_.find(key); it != point_memo_.end()) return it->second;
    BasisCombination c;
    bool corner = true;
    for (std::size_t j = 0; j < d_; ++j) corner = corner && y[j].level() == 0;
    if (corner) {
        if (!y.is_origin()) c.add(y, 1.0);
    } else {
        std::vector<Dyadic> coords(d_);
        for (std::size_t j = 0; j < d_; ++j) coords[j] = fixed[j] ? y[j] : Dyadic();
        const DyadicPoint corner_pt(coords);
        c.add(molecule(y, corner_pt), pow_alpha(l1_dyadic(y, corner_pt).to_double()));
        c.add(point(corner_pt, fixed), 1.0);
    }
    return point_memo_.emplace(key, std::move(c)).first->second;
}

BasisCombination DyadicBasis::single_axis(const DyadicPoint& u, const DyadicPoint& v, std::size_t i,
                                          const std::vector<bool>& fixed) {
    BasisCombination c;
    const auto path = line_path(v[i], u[i]);
    const double denom = pow_alpha((u[i] - v[i]).abs().to_double());
    std::vector<bool> face = fixed;
    face[i] = true;
    const DyadicPoint top = u.with(i, Dyadic::integer(1));
    const DyadicPoint bottom = u.with(i, Dyadic());
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const double weight = pow_alpha((path[k + 1] - path[k]).abs().to_double()) / denom;
        const LineExpansion ex = line_expansion(path[k + 1], path[k], alpha_);
        for (const auto& [coef, w] : ex.steps) c.add(step(u.with(i, w), i), weight * coef);
        if (ex.edge != 0.0) {
            c.add(point(top, face), weight * ex.edge);
            c.add(point(bottom, face), -weight * ex.edge);
        }
    }
    return c;
}

const BasisCombination& DyadicBasis::molecule(const DyadicPoint& u, const DyadicPoint& v) {
    const auto key = std::make_pair(u, v);
    if (auto it = mol_memo_.find(key); it != mol_memo_.end()) return it->second;
    if (u == v) throw std::invalid_argument("molecule endpoints coincide");
    if (u.dim() != d_ || v.dim() != d_) throw std::invalid_argument("molecule endpoints have wrong dimension");
    require_unit_cube(u, "molecule endpoint");
    require_unit_cube(v, "molecule endpoint");

    std::vector<bool> fixed(d_, false);
    std::vector<std::size_t> differ;
    for (std::size_t j = 0; j < d_; ++j) {
        if (u[j] != v[j]) differ.push_back(j);
        else fixed[j] = u[j].level() == 0;
    }
    BasisCombination c;
    if (differ.size() == 1) {
        c = single_axis(u, v, differ.front(), fixed);
    } else {
        const double total = pow_alpha(l1_dyadic(u, v).to_double());
        DyadicPoint cur = v;
        for (std::size_t j : differ) {
            DyadicPoint next = cur.with(j, u[j]);
            const double w = pow_alpha((u[j] - v[j]).abs().to_double()) / total;
            c.add(molecule(next, cur), w);
            cur = std::move(next);
        }
    }
    return mol_memo_.emplace(key, std::move(c)).first->second;
}

BasisCombination step_decompose(const DyadicPoint& v, std::size_t i, HolderExponent alpha) {
    DyadicBasis b(v.dim(), alpha);
    return b.step(v, i);
}

BasisCombination molecule_decompose(const DyadicPoint& u, const DyadicPoint& v, HolderExponent alpha) {
    DyadicBasis b(u.dim(), alpha);
    return b.molecule(u, v);
}

NormingReport verify_norming(std::size_t d, HolderExponent alpha, PExponent p, const NormingConfig& cfg) {
    if (cfg.k_max < 0) throw std::invalid_argument("k_max must be nonnegative");
    NormingReport rep;
    rep.d = d;
    rep.alpha = alpha.value();
    rep.p = p.value();
    rep.k_max = cfg.k_max;
    rep.basis_level = cfg.basis_level == -2 ? cfg.k_max : cfg.basis_level;
    const double r = rho(p, alpha);
    const double t = tau(p, alpha, d);
    const double dd = static_cast<double>(d);
    rep.molecule_bound = std::pow(t, dd) * std::pow(r, dd);
    rep.bm_bound = bm_bound(p, alpha, d);

    for (const auto& v : dyadic_grid(d, rep.basis_level)) {
        if (v.is_origin()) continue;
        const auto chk = basis_norm_check(v, alpha, p, cfg.exact_cap);
        rep.basis_bound = chk.bound;
        ++rep.n_basis;
        if (chk.exact) ++rep.n_basis_exact;
        rep.max_basis_norm = std::max(rep.max_basis_norm, chk.value);
        if (!(chk.value <= chk.bound * (1.0 + 1e-9))) rep.basis_ok = false;
    }
    if (rep.basis_bound == 0.0) rep.basis_bound = std::pow(dd, alpha.value()) * c_const(p, std::uint64_t{1} << d);

    DyadicBasis basis(d, alpha);
    const auto pts = dyadic_grid(d, cfg.k_max);
    rep.min_molecule_cost = std::numeric_limits<double>::infinity();
    for (const auto& u : pts) {
        for (const auto& v : pts) {
            if (u == v) continue;
            if (rep.n_molecules >= cfg.max_pairs) {
                rep.complete = false;
                break;
            }
            ++rep.n_molecules;
            const auto& comb = basis.molecule(u, v);
            const double cost = comb.cost(p);
            rep.max_molecule_cost = std::max(rep.max_molecule_cost, cost);
            rep.min_molecule_cost = std::min(rep.min_molecule_cost, cost);
            if (!(cost <= rep.molecule_bound * (1.0 + 1e-9))) rep.molecule_ok = false;
            const double res = max_abs_diff(synthesize(comb, alpha), molecule_element(u, v, alpha));
            rep.max_residual = std::max(rep.max_residual, res);
            if (!(res < 1e-9)) rep.residual_ok = false;
        }
        if (!rep.complete) break;
    }
    if (rep.n_molecules == 0) rep.min_molecule_cost = 0.0;
    return rep;
}

}  // namespace lipfree
