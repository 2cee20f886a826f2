#include <iostream>

#include <CLI11.hpp>

#include "lipfree/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Lipschitz free p-space computations and verification reports"};
    std::string command, p, alpha, R, config;
    std::size_t d = 1, samples = 1000;
    int kmax = 2;
    std::uint64_t seed = 1;
    lipfree::RunConfig cfg;

    auto* o_cmd = app.add_option("--command", command, "norm | retraction-verify | basis-verify | decompose | bm-report | lambda-check");
    auto* o_p = app.add_option("--p", p, "p in (0, 1], e.g. 1/2");
    auto* o_alpha = app.add_option("--alpha", alpha, "Hoelder exponent in (0, 1)");
    auto* o_d = app.add_option("--d", d, "dimension");
    auto* o_kmax = app.add_option("--kmax", kmax, "finest dyadic level");
    auto* o_R = app.add_option("--R", R, "cube side length");
    auto* o_seed = app.add_option("--seed", seed, "sampler seed");
    auto* o_samples = app.add_option("--samples", samples, "number of random samples");
    auto* o_in = app.add_option("--in", cfg.in, "element file (norm) or complex file");
    auto* o_out = app.add_option("--out", cfg.out, "report path (default stdout)");
    auto* o_space = app.add_option("--space", cfg.space, "point-set file (norm)");
    auto* o_u = app.add_option("--u", cfg.u, "dyadic point, e.g. 1/2,1/4");
    auto* o_v = app.add_option("--v", cfg.v, "dyadic point");
    app.add_option("--config", config, "JSON config; flags override its values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    lipfree::RunConfig merged;
    try {
        if (!config.empty()) lipfree::apply_config_file(merged, config);
        if (*o_cmd) merged.command = command;
        if (*o_p) merged.p = lipfree::parse_real(p);
        if (*o_alpha) merged.alpha = lipfree::parse_real(alpha);
        if (*o_d) merged.d = d;
        if (*o_kmax) merged.k_max = kmax;
        if (*o_R) merged.R = lipfree::parse_real(R);
        if (*o_seed) merged.seed = seed;
        if (*o_samples) merged.samples = samples;
        if (*o_in) merged.in = cfg.in;
        if (*o_out) merged.out = cfg.out;
        if (*o_space) merged.space = cfg.space;
        if (*o_u) merged.u = cfg.u;
        if (*o_v) merged.v = cfg.v;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return lipfree::run_and_write(merged, std::cerr);
}
