#include "lipfree/retraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lipfree/rng.hpp"

namespace lipfree {

namespace {

double lattice(double x, double R) {
    const double t = x / R;
    const double r = std::round(t);
    if (std::abs(t - r) <= 1e-12 * std::max(1.0, std::abs(t))) return r;
    return t;
}

RealVec local_coords(const RealVec& x, double R, const IntVec& w) {
    RealVec t(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) t[i] = lattice(x[i], R) - static_cast<double>(w[i]);
    return t;
}

// r(x) - r(y) for x, y in the cube w that differ only in coordinate j.
void one_coordinate(const RetractionContext& ctx, const IntVec& w, const RealVec& x, const RealVec& y, std::size_t j,
                    Decomposition& out) {
    const double diff = x[j] - y[j];
    if (diff == 0.0) return;
    const std::size_t d = x.size();
    const RealVec t = local_coords(x, ctx.complex().scale(), w);
    const std::size_t faces = std::size_t{1} << (d - 1);
    for (std::size_t mask = 0; mask < faces; ++mask) {
        IntVec top = w;
        double lam = 1.0;
        std::size_t bit = 0;
        for (std::size_t i = 0; i < d; ++i) {
            if (i == j) continue;
            const auto b = static_cast<std::int64_t>((mask >> bit++) & 1U);
            top[i] += b;
            lam *= scalar_coeff(t[i], b);
        }
        if (lam == 0.0) continue;
        IntVec bottom = top;
        top[j] += 1;
        out.terms.push_back({diff * lam, {ctx.index_of(top), ctx.index_of(bottom)}});
    }
}

// r(x) - r(y) for x, y in the same cube w through the chain z^0 = y, ..., z^d = x.
void same_cube(const RetractionContext& ctx, const IntVec& w, const RealVec& x, const RealVec& y, Decomposition& out) {
    RealVec prev = y;
    for (std::size_t i = 0; i < x.size(); ++i) {
        RealVec next = prev;
        next[i] = x[i];
        one_coordinate(ctx, w, next, prev, i, out);
        prev = std::move(next);
    }
}

const IntVec* common_cube(const std::vector<IntVec>& a, const std::vector<IntVec>& b) {
    for (const auto& w : a) {
        if (std::find(b.begin(), b.end(), w) != b.end()) return &w;
    }
    return nullptr;
}

}  // namespace

RetractionContext::RetractionContext(CubeComplex complex, PExponent p)
    : complex_(std::move(complex)), p_(p), space_(complex_.vertex_space()) {}

VertexMeasure retract_measure(const RetractionContext& ctx, const RealVec& x) {
    VertexMeasure mu;
    for (auto& vw : lambda_support(ctx.complex(), x)) mu.emplace(std::move(vw.vertex), vw.weight);
    return mu;
}

FreeElement measure_to_element(const RetractionContext& ctx, const VertexMeasure& mu) {
    FreeElement m(ctx.vertex_space());
    for (const auto& [v, w] : mu) m.add(ctx.index_of(v), w);
    return m;
}

FreeElement retract(const RetractionContext& ctx, const RealVec& x) {
    return measure_to_element(ctx, retract_measure(ctx, x));
}

FreeElement translate_element(const RetractionContext& ctx, const VertexMeasure& mu, const RealVec& shift) {
    const auto& cx = ctx.complex();
    if (shift.size() != cx.dim()) throw std::invalid_argument("shift has wrong dimension");
    IntVec s(shift.size());
    for (std::size_t i = 0; i < shift.size(); ++i) {
        const double t = lattice(shift[i], cx.scale());
        if (t != std::round(t)) throw std::invalid_argument("shift is not in the lattice R Z^d");
        s[i] = static_cast<std::int64_t>(t);
    }
    FreeElement m(ctx.vertex_space());
    for (const auto& [v, w] : mu) {
        IntVec moved = v;
        for (std::size_t i = 0; i < s.size(); ++i) moved[i] += s[i];
        if (!cx.has_vertex(moved)) throw std::invalid_argument("shifted vertex is not in V");
        m.add(cx.vertex_index(moved), w);
    }
    return m;
}

std::pair<double, double> rescale_check(const FreeElement& m, double R, const IntVec& shift, PExponent p,
                                        std::size_t cap) {
    const auto& host = *m.host();
    if (!host.has_coords()) throw std::invalid_argument("rescale_check needs a host with coordinates");
    if (!(R > 0.0)) throw std::invalid_argument("scale must be positive");
    std::vector<RealVec> pts = host.all_coords();
    for (auto& x : pts) {
        if (x.size() != shift.size()) throw std::invalid_argument("shift has wrong dimension");
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = R * x[i] + R * static_cast<double>(shift[i]);
    }
    // Same combinatorics as the host; distances scale by R exactly as a metric.
    auto dist = host.matrix();
    for (auto& row : dist) {
        for (double& v : row) v *= R;
    }
    auto image_host = std::make_shared<const PointedFiniteMetric>(PointedFiniteMetric::TrustedTag{}, std::move(dist),
                                                                  host.base(), std::move(pts));
    FreeElement image(image_host, m.weights());
    const double lhs = exact_norm_small(image, p, cap).value;
    const double rhs = R * exact_norm_small(m, p, cap).value;
    return {lhs, rhs};
}

Decomposition lipschitz_upper_decomposition(const RetractionContext& ctx, const RealVec& x, const RealVec& y) {
    const auto& cx = ctx.complex();
    const double R = cx.scale();
    Decomposition out{ctx.vertex_space(), {}};
    const auto cubes_x = cx.containing_cubes(x);
    const auto cubes_y = cx.containing_cubes(y);
    if (cubes_x.empty()) throw std::invalid_argument("x lies outside the cube complex");
    if (cubes_y.empty()) throw std::invalid_argument("y lies outside the cube complex");
    if (x == y) return out;

    if (const IntVec* shared = common_cube(cubes_x, cubes_y)) {
        same_cube(ctx, *shared, x, y, out);
    } else {
        const IntVec& w = cubes_x.front();
        const IntVec& u = cubes_y.front();
        const std::size_t d = x.size();
        RealVec xp = x;
        RealVec yp = x;
        IntVec s(d, 0);
        for (std::size_t i = 0; i < d; ++i) {
            if (w[i] == u[i]) continue;
            const double tx = lattice(x[i], R);
            const double ty = lattice(y[i], R);
            bool found = false;
            for (std::int64_t n : {w[i], w[i] + 1}) {
                for (std::int64_t m : {u[i], u[i] + 1}) {
                    const double split = std::abs(tx - n) + std::abs(static_cast<double>(n - m)) + std::abs(m - ty);
                    if (!found && std::abs(split - std::abs(tx - ty)) <= 1e-12 * std::max(1.0, std::abs(tx - ty))) {
                        xp[i] = R * static_cast<double>(n);
                        yp[i] = R * static_cast<double>(m);
                        s[i] = m - n;
                        found = true;
                    }
                }
            }
            if (!found) throw std::logic_error("no additive integer split between cubes");
        }
        same_cube(ctx, w, x, xp, out);
        double bridge = 0.0;
        for (auto v : s) bridge += std::abs(static_cast<double>(v));
        bridge *= R;
        if (bridge > 0.0) {
            for (const auto& vw : lambda_support_in_cube(R, w, xp)) {
                IntVec moved = vw.vertex;
                for (std::size_t i = 0; i < d; ++i) moved[i] += s[i];
                out.terms.push_back({vw.weight * bridge, {ctx.index_of(vw.vertex), ctx.index_of(moved)}});
            }
        }
        same_cube(ctx, u, yp, y, out);
    }
    double amax = 0.0;
    for (const auto& t : out.terms) amax = std::max(amax, std::abs(t.a));
    out.canonicalize(1e-14 * amax);
    return out;
}

WitnessResult witness_certificate(const RetractionContext& ctx, const IntVec& w) {
    const auto& cx = ctx.complex();
    if (!cx.has_cube(w)) throw std::invalid_argument("witness cube is not part of the complex");
    const std::size_t d = cx.dim();
    const double R = cx.scale();
    RealVec x(d);
    RealVec y(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double half = i + 1 < d ? 0.5 : 0.0;
        x[i] = R * (static_cast<double>(w[i]) + half);
        y[i] = R * (static_cast<double>(w[i]) + (i + 1 < d ? 0.5 : 1.0));
    }
    FreeElement element = retract(ctx, y) - retract(ctx, x);

    const auto& space = *ctx.vertex_space();
    const std::size_t n = space.size();
    DualCertificate cert;
    cert.kappa = 2;
    const std::size_t corners = std::size_t{1} << d;
    for (std::size_t mask = 0; mask < corners; ++mask) {
        IntVec v = w;
        for (std::size_t i = 0; i < d; ++i) v[i] += static_cast<std::int64_t>((mask >> i) & 1U);
        const std::size_t iv = ctx.index_of(v);
        std::vector<double> phi(n, 0.0);
        if (iv == space.base()) {
            for (std::size_t k = 0; k < n; ++k) phi[k] = k == iv ? 0.0 : R;
        } else {
            phi[iv] = R;
        }
        std::set<std::pair<std::size_t, std::size_t>> act;
        for (std::size_t k = 0; k < n; ++k) {
            if (k != iv) act.insert({std::min(k, iv), std::max(k, iv)});
        }
        cert.functions.push_back(std::move(phi));
        cert.activity.push_back(std::move(act));
    }

    Decomposition upper{ctx.vertex_space(), {}};
    const std::size_t faces = std::size_t{1} << (d - 1);
    const double coeff = R * std::ldexp(1.0, -static_cast<int>(d - 1));
    for (std::size_t mask = 0; mask < faces; ++mask) {
        IntVec bottom = w;
        for (std::size_t i = 0; i + 1 < d; ++i) bottom[i] += static_cast<std::int64_t>((mask >> i) & 1U);
        IntVec top = bottom;
        top[d - 1] += 1;
        upper.terms.push_back({coeff, {ctx.index_of(top), ctx.index_of(bottom)}});
    }
    upper.canonicalize();

    const double value = dual_lower_bound(element, ctx.p(), cert);
    return {std::move(x), std::move(y), std::move(element), std::move(cert), std::move(upper), value};
}

WitnessResult lower_bound_witness(std::size_t d, PExponent p) {
    RetractionContext ctx(unit_cube_complex(d), p);
    return witness_certificate(ctx, IntVec(d, 0));
}

LipschitzReport estimate_lipschitz(const RetractionContext& ctx, const SamplerConfig& cfg) {
    const auto& cx = ctx.complex();
    const std::size_t d = cx.dim();
    const double R = cx.scale();
    const PExponent p = ctx.p();
    const auto bounds = retraction_bounds(p, d);
    LipschitzReport rep;
    rep.d = d;
    rep.p = p.value();
    rep.R = R;
    rep.n_cubes = cx.offsets().size();
    rep.n_vertices = cx.vertex_count();
    rep.n_samples = cfg.n_samples;
    rep.seed = cfg.seed;
    rep.theoretical_lower = bounds.lower;
    rep.theoretical_upper = bounds.upper;

    const std::vector<IntVec> cubes(cx.offsets().begin(), cx.offsets().end());
    const auto wit = witness_certificate(ctx, cubes.front());
    double dist_w = 0.0;
    for (std::size_t i = 0; i < d; ++i) dist_w += std::abs(wit.x[i] - wit.y[i]);
    rep.witness_value = wit.certified_value / dist_w;
    rep.witness_upper = upper_bound_from(wit.element, p, wit.upper) / dist_w;
    rep.witness_ok = std::abs(rep.witness_value - bounds.lower) <= 1e-9 * bounds.lower &&
                     std::abs(rep.witness_upper - bounds.lower) <= 1e-9 * bounds.lower;
    rep.max_lower_ratio = rep.witness_value;

    const bool exact = cfg.exact_norms && cx.vertex_count() <= cfg.exact_cap;
    rep.exact_checked = exact;
    Rng rng(cfg.seed);
    auto sample_in = [&](const IntVec& w) { return sample_in_cube(R, w, rng, cfg.boundary_rate); };
    std::size_t exact_done = 0;
    for (std::size_t s = 0; s < cfg.n_samples; ++s) {
        const IntVec& w = cubes[uniform_index(rng, cubes.size())];
        const RealVec x = sample_in(w);
        RealVec y;
        switch (s % 3) {
            case 0:
                y = sample_in(w);
                break;
            case 1: {
                y = x;
                const std::size_t j = uniform_index(rng, d);
                y[j] = sample_in(w)[j];
                break;
            }
            default:
                y = sample_in(cubes[uniform_index(rng, cubes.size())]);
        }
        double dist = 0.0;
        for (std::size_t i = 0; i < d; ++i) dist += std::abs(x[i] - y[i]);
        if (dist == 0.0) continue;

        const FreeElement diff = retract(ctx, x) - retract(ctx, y);
        const Decomposition dec = lipschitz_upper_decomposition(ctx, x, y);
        const double residual = evaluate(dec).max_abs_diff(diff);
        rep.max_residual = std::max(rep.max_residual, residual);
        if (!(residual <= 1e-9)) rep.residual_ok = false;
        const double cost_ratio = p_cost(dec, p) / dist;
        rep.max_upper_cost_ratio = std::max(rep.max_upper_cost_ratio, cost_ratio);
        if (!(cost_ratio <= bounds.upper * (1.0 + 1e-9))) rep.upper_ok = false;

        // The 1-norm never exceeds the p-norm, so it is a certified lower bound.
        double lower = exact_norm_p1(diff).value;
        if (exact && exact_done < cfg.exact_samples) {
            ++exact_done;
            lower = std::max(lower, exact_norm_small(diff, p, cfg.exact_cap).value);
        }
        const double lower_ratio = lower / dist;
        rep.max_lower_ratio = std::max(rep.max_lower_ratio, lower_ratio);
        if (lower_ratio > cost_ratio * (1.0 + 1e-9) + 1e-12) rep.lower_ok = false;
    }
    return rep;
}

}  // namespace lipfree
