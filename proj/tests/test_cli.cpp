#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lipfree/cli.hpp"

using namespace lipfree;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "lipfree_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

std::string read_file(const fs::path& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int exit_code(const std::string& args) {
    const int rc = std::system((std::string(LIPFREE_CLI) + " " + args + " 2>/dev/null >/dev/null").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("bm-report") {
    RunConfig cfg;
    cfg.command = "bm-report";
    cfg.d = 1;
    cfg.alpha = 0.5;
    cfg.p = 1.0;
    const auto r = run(cfg);
    CHECK(r.status == 0);
    CHECK(r.report.contains("bm_bound"));
    CHECK(r.report["bm_bound"].get<double>() == doctest::Approx(bm_bound(PExponent(1.0), HolderExponent(0.5), 1)));
}

TEST_CASE("retraction-verify reproduces the witness value") {
    RunConfig cfg;
    cfg.command = "retraction-verify";
    cfg.d = 2;
    cfg.p = 0.5;
    cfg.seed = 9;
    cfg.samples = 200;
    const auto r = run(cfg);
    CHECK(r.status == 0);
    CHECK(r.report["witness_value"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("reports are byte-stable") {
    RunConfig cfg;
    cfg.command = "retraction-verify";
    cfg.d = 2;
    cfg.p = 0.75;
    cfg.samples = 100;
    CHECK(dump_report(run(cfg).report) == dump_report(run(cfg).report));
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0 / 0.0) == "null");
}

TEST_CASE("norm command") {
    const auto space = scratch("space.txt");
    const auto elem = scratch("elem.txt");
    write_file(space, "1 0\n0\n1\n2\n");
    write_file(elem, "1 2\n");
    RunConfig cfg;
    cfg.command = "norm";
    cfg.space = space.string();
    cfg.in = elem.string();
    cfg.p = 0.5;
    auto r = run(cfg);
    CHECK(r.status == 0);
    CHECK(r.report["value"].get<double>() == doctest::Approx(2.0));

    write_file(elem, "1 2\nnot a line\n");
    r = run(cfg);
    CHECK(r.status == 2);
    CHECK(r.message.find("line 2") != std::string::npos);
    cfg.in = scratch("missing.txt").string();
    CHECK(run(cfg).status == 2);
}

TEST_CASE("other commands") {
    RunConfig cfg;
    cfg.command = "basis-verify";
    cfg.d = 1;
    cfg.k_max = 3;
    auto r = run(cfg);
    CHECK(r.status == 0);
    CHECK(r.report["complete"].get<bool>());

    cfg.command = "decompose";
    cfg.u = "1/2,1/4";
    cfg.v = "0,1";
    r = run(cfg);
    CHECK(r.status == 0);
    CHECK(r.report["residual"].get<double>() < 1e-9);
    cfg.v = "0";
    CHECK(run(cfg).status == 2);
    cfg.v = "1/3,0";
    CHECK(run(cfg).status == 2);

    cfg.command = "lambda-check";
    cfg.d = 3;
    cfg.samples = 500;
    CHECK(run(cfg).status == 0);

    cfg.command = "teleport";
    CHECK(run(cfg).status == 2);
    cfg.command = "bm-report";
    cfg.p = 2.0;
    CHECK(run(cfg).status == 2);
}

TEST_CASE("config file with flag override") {
    const auto conf = scratch("conf.json");
    write_file(conf, R"({"command": "bm-report", "p": "1/2", "alpha": 0.25, "d": 2})");
    RunConfig cfg;
    apply_config_file(cfg, conf.string());
    CHECK(cfg.command == "bm-report");
    CHECK(cfg.p == 0.5);
    CHECK(cfg.d == 2);
    write_file(conf, R"({"bogus": 1})");
    RunConfig other;
    CHECK_THROWS(apply_config_file(other, conf.string()));

    write_file(conf, R"({"command": "bm-report", "d": 2})");
    const auto out = scratch("bm.json");
    CHECK(exit_code("--config " + conf.string() + " --d 3 --out " + out.string()) == 0);
    CHECK(read_file(out).find("\"d\":3") != std::string::npos);
}

TEST_CASE("exit codes of the binary") {
    const auto space = scratch("space2.txt");
    const auto elem = scratch("bad_elem.txt");
    write_file(space, "1 0\n0\n1\n");
    write_file(elem, "one 1\n");
    CHECK(exit_code("--command norm --space " + space.string() + " --in " + elem.string()) == 2);
    CHECK(exit_code("--command bm-report --d 2 --p 1/2 --alpha 1/2") == 0);
    CHECK(exit_code("--command retraction-verify --d 1 --samples 50") == 0);
    CHECK(exit_code("--command bm-report --p abc") == 2);
    CHECK(exit_code("--no-such-flag") == 2);
}
