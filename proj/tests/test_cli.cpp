#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "fdeq/density.hpp"

#ifndef FDEQ_CLI_PATH
#define FDEQ_CLI_PATH "./fdeq"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(FDEQ_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.output.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

} // namespace

TEST_CASE("classify: ball moments give Regime II with R = 1, exit 0") {
    const auto r = run_cli("classify --n 3 --m0 4.18879020478639 --m2 2.51327412287183 --json "
                           "--no-timestamp");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j["schema"] == "fermi-equilibria/1");
    CHECK(j["result"]["regime"] == "ball");
    CHECK(std::abs(j["result"]["R"].get<double>() - 1.0) < 1e-6);
}

TEST_CASE("invert: Fermi-Dirac(1,1) moments round-trip through the CLI") {
    const fdeq::Moments m = fdeq::compute_moments(fdeq::make_fermi_dirac(1.0, 1.0, {}, 2));
    char args[256];
    std::snprintf(args, sizeof(args), "invert --n 2 --m0 %.15g --m2 %.15g --json --no-timestamp",
                  m.m0, m.m2);
    const auto r = run_cli(args);
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(std::abs(j["result"]["a"].get<double>() - 1.0) < 1e-5);
    CHECK(std::abs(j["result"]["b"].get<double>() - 1.0) < 1e-5);
    CHECK(j["result"]["residual_m0_rel"].get<double>() < 1e-7);
}

TEST_CASE("classify: infeasible moments exit 1") {
    const auto r = run_cli("classify --n 2 --m0 1.0 --m2 0.05 --json --no-timestamp");
    CHECK(r.exit_code == 1);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j["result"]["regime"] == "infeasible");
    CHECK(j["status"] == "fail");
}

TEST_CASE("geometry check: reuleaux fails with a witness, ball passes") {
    const auto bad = run_cli("geometry check --shape reuleaux --pairs 20000 --seed 7 --json "
                             "--no-timestamp");
    CHECK(bad.exit_code == 1);
    const auto j = nlohmann::json::parse(bad.output);
    CHECK(j["result"]["failure_count"].get<int>() >= 1);
    REQUIRE(j["result"]["witnesses"].is_array());
    CHECK(!j["result"]["witnesses"].empty());
    CHECK(j["result"]["witnesses"][0].contains("x"));
    CHECK(j["result"]["witnesses"][0].contains("candidate2"));

    const auto good = run_cli("geometry check --shape ball --n 3 --pairs 5000 --seed 7 --json "
                              "--no-timestamp");
    CHECK(good.exit_code == 0);
}

TEST_CASE("JSON output is byte-identical for equal argv, any worker count") {
    const std::string argv = "residual --n 2 --kind ball --R 1.0 --samples 20000 --seed 42 "
                             "--points 6 --json --no-timestamp";
    const auto a = run_cli(argv);
    const auto b = run_cli(argv);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.output == b.output);
    const auto c = run_cli(argv + " --workers 3");
    CHECK(a.output == c.output);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("no-such-subcommand").exit_code == 2);
    CHECK(run_cli("classify --n 3").exit_code == 2); // missing required flags
}

TEST_CASE("fermi-int emits values and identity residuals") {
    const auto r = run_cli("fermi-int --n 3 --s 1 --t 1 --json --no-timestamp");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(std::abs(j["result"]["I_s"].get<double>() - 0.34657359) < 1e-7);
    CHECK(j["result"]["ibp_residual_rel"].get<double>() < 1e-9);
}

TEST_CASE("moments subcommand reads radial CSV densities") {
    const std::string path = "/tmp/fdeq_cli_moments.csv";
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        REQUIRE(f != nullptr);
        std::fputs("r,value\n0.0,1.0\n1.0,1.0\n1.0000000001,0.0\n", f);
        std::fclose(f);
    }
    const auto r = run_cli("moments --input " + path + " --n 2 --json --no-timestamp");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    // numerically a unit disk: m0 = pi, entropy = 0 up to the 1e-10 step
    CHECK(std::abs(j["result"]["m0"].get<double>() - 3.14159265) < 1e-4);
    CHECK(j["result"]["entropy"].get<double>() < 1e-6);
}

TEST_CASE("verify subcommand: equilibria pass, the annulus is exposed") {
    const auto good = run_cli("verify --n 2 --kind fd --a 1 --b 1 --json --no-timestamp");
    CHECK(good.exit_code == 0);
    const auto jg = nlohmann::json::parse(good.output);
    CHECK(jg["result"]["pass"] == true);

    const auto bad = run_cli("verify --n 2 --kind annulus --eps 0.5 --json --no-timestamp");
    CHECK(bad.exit_code == 1);
    const auto jb = nlohmann::json::parse(bad.output);
    CHECK(jb["result"]["ratio_pass"] == true);
    CHECK(jb["result"]["form_pass"] == false);
}

TEST_CASE("fermi-int curve emits CSV rows") {
    const auto r = run_cli("fermi-int --n 2 --s 1 --curve --points 5 --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.rfind("t,I_s,J_s,P\n", 0) == 0);
    int lines = 0;
    for (char ch : r.output)
        if (ch == '\n') ++lines;
    CHECK(lines == 6);
}
