#pragma once

#include <cstdint>
#include <string>

#include "lipfree/report.hpp"

namespace lipfree {

struct RunConfig {
    std::string command;
    double p = 1.0;
    double alpha = 0.5;
    std::size_t d = 1;
    int k_max = 2;
    double R = 1.0;
    std::uint64_t seed = 1;
    std::size_t samples = 1000;
    std::string in;     // element file (norm) or complex file
    std::string out;    // report path; empty writes to stdout
    std::string space;  // point-set file for norm
    std::string u;      // comma-separated dyadic coordinates for decompose
    std::string v;
};

/// Overwrites fields from a JSON object whose keys are the flag names
/// (command, p, alpha, d, kmax, R, seed, samples, in, out, space, u, v).
void apply_config_file(RunConfig& cfg, const std::string& path);

/// "0.5", "3/4" and the like.
double parse_real(const std::string& text);

struct RunResult {
    int status = 0;  // 0 pass, 1 certified check failed, 2 bad input
    Report report;
    std::string message;
};

/// Dispatches the command. Never throws: input errors map to status 2.
RunResult run(const RunConfig& cfg);

/// run() plus writing the report to cfg.out (or stdout) and the message to err.
int run_and_write(const RunConfig& cfg, std::ostream& err);

}  // namespace lipfree
