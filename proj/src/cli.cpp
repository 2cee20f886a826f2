#include "lipfree/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace lipfree {

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

DyadicPoint parse_point(const std::string& text, const char* flag) {
    if (text.empty()) throw InputError(std::string("missing --") + flag);
    std::vector<Dyadic> coords;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto b = part.find_first_not_of(" \t");
        const auto e = part.find_last_not_of(" \t");
        coords.push_back(parse_dyadic(b == std::string::npos ? "" : part.substr(b, e - b + 1)));
    }
    return DyadicPoint(std::move(coords));
}

CubeComplex complex_for(const RunConfig& cfg) {
    if (cfg.in.empty()) {
        if (!(cfg.R > 0.0) || !std::isfinite(cfg.R)) throw InputError("R must be positive");
        return unit_cube_complex(cfg.d, cfg.R);
    }
    return load_complex(cfg.in);
}

void check_dim(std::size_t d, std::size_t max_d) {
    if (d < 1 || d > max_d) throw InputError("d must lie in [1, " + std::to_string(max_d) + "]");
}

RunResult fail_or_pass(Report rep, const char* first_failure) {
    RunResult res;
    rep["passed"] = first_failure == nullptr;
    if (first_failure) {
        rep["violated"] = first_failure;
        res.status = 1;
        res.message = std::string("check failed: ") + first_failure;
    }
    res.report = std::move(rep);
    return res;
}

RunResult run_norm(const RunConfig& cfg) {
    if (cfg.space.empty()) throw InputError("norm needs --space");
    if (cfg.in.empty()) throw InputError("norm needs --in");
    const PExponent p(cfg.p);
    const MetricPtr host = load_point_set(cfg.space);
    std::ifstream f(cfg.in);
    if (!f) throw InputError("cannot open " + cfg.in);
    const FreeElement m = read_element(f, host);
    const NormResult nr = p.value() == 1.0 ? exact_norm_p1(m) : exact_norm_small(m, p);
    const double residual = evaluate(nr.witness).max_abs_diff(m);
    const double cost = p_cost(nr.witness, p);

    Report rep;
    rep["command"] = cfg.command;
    rep["p"] = p.value();
    rep["n_points"] = host->size();
    rep["value"] = nr.value;
    rep["witness_cost"] = cost;
    rep["witness_residual"] = residual;
    Report terms = Report::array();
    for (const auto& t : nr.witness.terms) terms.push_back(Report::array({t.a, t.m.x, t.m.y}));
    rep["witness"] = std::move(terms);
    const char* bad = nullptr;
    if (!(residual <= 1e-9)) bad = "witness_reconstruction";
    else if (!(std::abs(cost - nr.value) <= 1e-9 * std::max(1.0, nr.value))) bad = "witness_cost";
    return fail_or_pass(std::move(rep), bad);
}

RunResult run_retraction(const RunConfig& cfg) {
    const PExponent p(cfg.p);
    const CubeComplex cx = complex_for(cfg);
    check_dim(cx.dim(), 4);
    SamplerConfig sc;
    sc.n_samples = cfg.samples;
    sc.seed = cfg.seed;
    const auto r = estimate_lipschitz(RetractionContext(cx, p), sc);
    Report rep;
    rep["command"] = cfg.command;
    rep.update(to_report(r));
    const char* bad = nullptr;
    if (!r.witness_ok) bad = "witness_value";
    else if (!r.residual_ok) bad = "reconstruction_residual";
    else if (!r.upper_ok) bad = "upper_bound";
    else if (!r.lower_ok) bad = "lower_bound";
    return fail_or_pass(std::move(rep), bad);
}

RunResult run_basis(const RunConfig& cfg) {
    check_dim(cfg.d, 3);
    if (cfg.k_max < 0 || cfg.k_max > 8) throw InputError("kmax must lie in [0, 8]");
    NormingConfig nc;
    nc.k_max = cfg.k_max;
    const auto r = verify_norming(cfg.d, HolderExponent(cfg.alpha), PExponent(cfg.p), nc);
    Report rep;
    rep["command"] = cfg.command;
    rep.update(to_report(r));
    const char* bad = nullptr;
    if (!r.residual_ok) bad = "reconstruction_residual";
    else if (!r.basis_ok) bad = "basis_norm";
    else if (!r.molecule_ok) bad = "molecule_cost";
    return fail_or_pass(std::move(rep), bad);
}

RunResult run_decompose(const RunConfig& cfg) {
    const HolderExponent alpha(cfg.alpha);
    const PExponent p(cfg.p);
    const DyadicPoint u = parse_point(cfg.u, "u");
    const DyadicPoint v = parse_point(cfg.v, "v");
    if (u.dim() != v.dim()) throw InputError("--u and --v differ in dimension");
    check_dim(u.dim(), 3);
    const std::size_t d = u.dim();
    DyadicBasis basis(d, alpha);
    const BasisCombination& c = basis.molecule(u, v);
    const double cost = c.cost(p);
    const double bound = std::pow(tau(p, alpha, d), static_cast<double>(d)) * std::pow(rho(p, alpha), static_cast<double>(d));
    const double residual = max_abs_diff(synthesize(c, alpha), molecule_element(u, v, alpha));
    Report rep;
    rep["command"] = cfg.command;
    rep["d"] = d;
    rep["alpha"] = alpha.value();
    rep["p"] = p.value();
    rep["u"] = u.to_string();
    rep["v"] = v.to_string();
    rep["n_terms"] = c.coeffs().size();
    rep["cost"] = cost;
    rep["bound"] = bound;
    rep["residual"] = residual;
    rep["coefficients"] = to_report(c);
    const char* bad = nullptr;
    if (!(residual < 1e-9)) bad = "reconstruction_residual";
    else if (!(cost <= bound * (1.0 + 1e-9))) bad = "molecule_cost";
    return fail_or_pass(std::move(rep), bad);
}

RunResult run_bm(const RunConfig& cfg) {
    check_dim(cfg.d, 30);
    Report rep;
    rep["command"] = cfg.command;
    rep.update(constants_report(PExponent(cfg.p), HolderExponent(cfg.alpha), cfg.d));
    return fail_or_pass(std::move(rep), nullptr);
}

RunResult run_lambda(const RunConfig& cfg) {
    const CubeComplex cx = complex_for(cfg);
    check_dim(cx.dim(), 6);
    const auto r = check_partition(cx, cfg.samples, cfg.seed);
    Report rep;
    rep["command"] = cfg.command;
    rep["d"] = cx.dim();
    rep["R"] = cx.scale();
    rep["n_cubes"] = cx.offsets().size();
    rep["seed"] = cfg.seed;
    rep.update(to_report(r));
    const char* bad = nullptr;
    if (!(r.max_sum_error <= 1e-12)) bad = "partition_of_unity";
    else if (!(r.min_weight >= 0.0)) bad = "nonnegativity";
    else if (r.max_kronecker_error != 0.0) bad = "kronecker";
    return fail_or_pass(std::move(rep), bad);
}

}  // namespace

double parse_real(const std::string& text) {
    auto one = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (s.empty() || used != s.size()) throw std::invalid_argument("not a number: '" + text + "'");
        return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string::npos) return one(text);
    return one(text.substr(0, slash)) / one(text.substr(slash + 1));
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config " + path);
    const auto j = nlohmann::json::parse(f);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    auto real = [](const nlohmann::json& v) { return v.is_string() ? parse_real(v.get<std::string>()) : v.get<double>(); };
    for (const auto& [k, v] : j.items()) {
        if (k == "command") cfg.command = v.get<std::string>();
        else if (k == "p") cfg.p = real(v);
        else if (k == "alpha") cfg.alpha = real(v);
        else if (k == "d") cfg.d = v.get<std::size_t>();
        else if (k == "kmax" || k == "k_max") cfg.k_max = v.get<int>();
        else if (k == "R") cfg.R = real(v);
        else if (k == "seed") cfg.seed = v.get<std::uint64_t>();
        else if (k == "samples") cfg.samples = v.get<std::size_t>();
        else if (k == "in") cfg.in = v.get<std::string>();
        else if (k == "out") cfg.out = v.get<std::string>();
        else if (k == "space") cfg.space = v.get<std::string>();
        else if (k == "u") cfg.u = v.get<std::string>();
        else if (k == "v") cfg.v = v.get<std::string>();
        else throw std::invalid_argument("unknown config key '" + k + "'");
    }
}

RunResult run(const RunConfig& cfg) {
    try {
        if (cfg.command == "norm") return run_norm(cfg);
        if (cfg.command == "retraction-verify") return run_retraction(cfg);
        if (cfg.command == "basis-verify") return run_basis(cfg);
        if (cfg.command == "decompose") return run_decompose(cfg);
        if (cfg.command == "bm-report") return run_bm(cfg);
        if (cfg.command == "lambda-check") return run_lambda(cfg);
        throw InputError("unknown command '" + cfg.command + "'");
    } catch (const std::exception& e) {
        RunResult res;
        res.status = 2;
        res.message = std::string("error: ") + e.what();
        return res;
    }
}

int run_and_write(const RunConfig& cfg, std::ostream& err) {
    const RunResult res = run(cfg);
    if (!res.message.empty()) err << res.message << '\n';
    if (res.status == 2) return 2;
    if (cfg.out.empty()) {
        write_report(std::cout, res.report);
    } else {
        std::ofstream f(cfg.out);
        if (!f) {
            err << "error: cannot write " << cfg.out << '\n';
            return 2;
        }
        write_report(f, res.report);
    }
    return res.status;
}

}  // namespace lipfree
