#include "lipfree/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace lipfree {

namespace {

void emit(std::string& out, const Report& r) {
    switch (r.type()) {
        case Report::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [k, v] : r.items()) {
                if (!first) out += ',';
                first = false;
                out += Report(k).dump();
                out += ':';
                emit(out, v);
            }
            out += '}';
            break;
        }
        case Report::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) out += ',';
                emit(out, r[i]);
            }
            out += ']';
            break;
        }
        case Report::value_t::number_float:
            out += format_double(r.get<double>());
            break;
        default:
            out += r.dump();
    }
}

}  // namespace

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string dump_report(const Report& r) {
    std::string out;
    emit(out, r);
    return out;
}

void write_report(std::ostream& out, const Report& r) { out << dump_report(r) << '\n'; }

Report to_report(const LipschitzReport& r) {
    Report j;
    j["d"] = r.d;
    j["p"] = r.p;
    j["R"] = r.R;
    j["n_cubes"] = r.n_cubes;
    j["n_vertices"] = r.n_vertices;
    j["n_samples"] = r.n_samples;
    j["seed"] = r.seed;
    j["theoretical_lower"] = r.theoretical_lower;
    j["theoretical_upper"] = r.theoretical_upper;
    j["witness_value"] = r.witness_value;
    j["witness_upper"] = r.witness_upper;
    j["max_lower_ratio"] = r.max_lower_ratio;
    j["max_upper_cost_ratio"] = r.max_upper_cost_ratio;
    j["max_residual"] = r.max_residual;
    j["exact_checked"] = r.exact_checked;
    j["upper_ok"] = r.upper_ok;
    j["residual_ok"] = r.residual_ok;
    j["witness_ok"] = r.witness_ok;
    j["lower_ok"] = r.lower_ok;
    j["passed"] = r.passed();
    return j;
}

Report to_report(const NormingReport& r) {
    Report j;
    j["d"] = r.d;
    j["alpha"] = r.alpha;
    j["p"] = r.p;
    j["k_max"] = r.k_max;
    j["basis_level"] = r.basis_level;
    j["n_basis"] = r.n_basis;
    j["n_basis_exact"] = r.n_basis_exact;
    j["n_molecules"] = r.n_molecules;
    j["max_basis_norm"] = r.max_basis_norm;
    j["basis_bound"] = r.basis_bound;
    j["max_molecule_cost"] = r.max_molecule_cost;
    j["min_molecule_cost"] = r.min_molecule_cost;
    j["molecule_bound"] = r.molecule_bound;
    j["max_residual"] = r.max_residual;
    j["bm_bound"] = r.bm_bound;
    j["complete"] = r.complete;
    j["basis_ok"] = r.basis_ok;
    j["molecule_ok"] = r.molecule_ok;
    j["residual_ok"] = r.residual_ok;
    j["passed"] = r.passed();
    return j;
}

Report to_report(const PartitionCheck& r) {
    Report j;
    j["n_points"] = r.n_points;
    j["max_sum_error"] = r.max_sum_error;
    j["min_weight"] = r.min_weight;
    j["max_support"] = r.max_support;
    j["max_kronecker_error"] = r.max_kronecker_error;
    j["passed"] = r.passed();
    return j;
}

Report to_report(const BasisCombination& c) {
    Report arr = Report::array();
    for (const auto& [v, a] : c.coeffs()) {
        Report t;
        t["v"] = v.to_string();
        t["level"] = v.level();
        t["coeff"] = a;
        arr.push_back(std::move(t));
    }
    return arr;
}

Report constants_report(PExponent p, HolderExponent alpha, std::size_t d) {
    const auto rb = retraction_bounds(p, d);
    Report j;
    j["d"] = d;
    j["alpha"] = alpha.value();
    j["p"] = p.value();
    j["C_p_2d"] = c_const(p, std::uint64_t{1} << d);
    j["rho"] = rho(p, alpha);
    j["tau"] = tau(p, alpha, d);
    j["retraction_lower"] = rb.lower;
    j["retraction_upper"] = rb.upper;
    j["hat_cost_bound"] = hat_cost_bound(p, alpha);
    j["path_cost_bound"] = path_cost_bound(p, alpha);
    j["basis_bound"] = std::pow(static_cast<double>(d), alpha.value()) * c_const(p, std::uint64_t{1} << d);
    j["bm_bound"] = bm_bound(p, alpha, d);
    j["log10_bm_bound"] = log_bm_bound(p, alpha, d) / std::log(10.0);
    return j;
}

}  // namespace lipfree
