// End-to-end tests against the built CLI binary.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sstream>
#include <cmath>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(GCM_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

} // namespace

TEST_CASE("bound command emits the JSON schema and the right value") {
    auto r = run_cli("bound --kind main --n 8 --alpha pi --rho 1");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    // exact schema keys
    for (const char* key : {"kind", "n", "alpha", "rho", "value", "log_value", "terms_used",
                            "tail_bound", "notes"})
        CHECK(j.contains(key));
    CHECK(j.size() == 9);
    CHECK(j["kind"] == "main_lower");
    CHECK(j["n"] == 8);
    CHECK(std::fabs(j["value"].get<double>() - 0.43442005) <= 1e-7);
    CHECK(std::fabs(std::exp(j["log_value"].get<double>()) - j["value"].get<double>()) <= 1e-8);
}

TEST_CASE("identical requests produce byte-identical output") {
    auto a = run_cli("bound --kind main --n 24 --alpha pi --rho 1");
    auto b = run_cli("bound --kind main --n 24 --alpha pi --rho 1");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    auto t1 = run_cli("table --rows 1-4,8 --alpha pi --rho 1 --format csv");
    auto t2 = run_cli("table --rows 1-4,8 --alpha pi --rho 1 --format csv");
    CHECK(t1.out == t2.out);
}

TEST_CASE("alpha flag grammar") {
    // expectation bound in n = 2 is (pi/alpha) rho: landmark tokens hit exactly
    auto r1 = run_cli("bound --kind expectation --n 2 --alpha 4pi/e --rho 1");
    REQUIRE(r1.exit_code == 0);
    CHECK(std::fabs(nlohmann::json::parse(r1.out)["value"].get<double>() -
                    2.718281828459045 / 4.0) <= 1e-8);
    auto r2 = run_cli("bound --kind expectation --n 2 --alpha pi*e --rho 1");
    REQUIRE(r2.exit_code == 0);
    CHECK(std::fabs(nlohmann::json::parse(r2.out)["value"].get<double>() -
                    1.0 / 2.718281828459045) <= 1e-8);
    auto r3 = run_cli("bound --kind expectation --n 2 --alpha 2.5 --rho 1");
    REQUIRE(r3.exit_code == 0);
    CHECK(std::fabs(nlohmann::json::parse(r3.out)["value"].get<double>() -
                    3.141592653589793 / 2.5) <= 1e-7); // 8 significant digits

    auto bad = run_cli("bound --kind main --n 2 --alpha twopi --rho 1");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("domain errors exit with code 2") {
    CHECK(run_cli("bound --kind main --n 0 --alpha pi --rho 1").exit_code == 2);
    CHECK(run_cli("bound --kind main --n 2 --alpha pi --rho -1").exit_code == 2);
    CHECK(run_cli("bound --kind main --n 2 --alpha pi --rho 1 --bogus").exit_code == 2);
    CHECK(run_cli("bound --kind cond_expectation --n 1 --alpha pi --rho 1").exit_code == 2);
}

TEST_CASE("table CSV has the documented columns and record sources") {
    auto r = run_cli("table --rows 1-3,8,24,100 --alpha pi --rho 1 --format csv");
    REQUIRE(r.exit_code == 0);
    std::istringstream is(r.out);
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "n,our_bound,record,record_source");
    int rows = 0;
    bool saw_computed = false, saw_literature = false, saw_expectation = false;
    while (std::getline(is, line)) {
        ++rows;
        auto last = line.rfind(',');
        std::string source = line.substr(last + 1);
        CHECK((source == "computed" || source == "literature" || source == "expectation"));
        saw_computed |= source == "computed";
        saw_literature |= source == "literature";
        saw_expectation |= source == "expectation";
    }
    CHECK(rows == 6);
    CHECK(saw_computed);
    CHECK(saw_literature);
    CHECK(saw_expectation);
}

TEST_CASE("lattice and aux subcommands") {
    auto r = run_cli("lattice --name Leech --alpha pi --rho 1");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["kind"] == "lattice_energy");
    CHECK(std::fabs(j["value"].get<double>() - 0.79965281) <= 1e-7);

    auto a = run_cli("aux --n 2 --alpha pi --rho 1 --M 120");
    REQUIRE(a.exit_code == 0);
    auto ja = nlohmann::json::parse(a.out);
    CHECK(ja["kind"] == "lp_via_aux");
    CHECK(std::fabs(ja["value"].get<double>() - 0.15702655) <= 1e-5);
}

TEST_CASE("asymptotics and powerlaw subcommands") {
    auto r = run_cli("asymptotics --alpha pi");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(std::fabs(j["lower_rate"].get<double>() - 1.0) <= 1e-7);
    CHECK(std::fabs(j["c"].get<double>() - 0.013519729) <= 1e-8);

    auto p = run_cli("powerlaw --n 2 --s 2 --rho 1 --tol 1e-6");
    REQUIRE(p.exit_code == 0);
    auto jp = nlohmann::json::parse(p.out);
    CHECK(std::fabs(jp["upper"].get<double>() - 26.318945) <= 1e-4);
    CHECK(jp["lower"].get<double>() <= jp["upper"].get<double>());
}

TEST_CASE("verify subcommand passes") {
    auto r = run_cli("verify --seed 20240601");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("PASS") != std::string::npos);
}
