#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string path = "/tmp/qperc_cli_out.txt";
    const std::string cmd = std::string(QPERC_BIN) + " " + args + " > " + path + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(status), ss.str()};
}

} // namespace

TEST_CASE("scp subcommand prints the conversion report") {
    const auto r = run_cli("scp --phi1 0.4");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("phi1,scp,majorized,conversion_probability") != std::string::npos);
    CHECK(r.out.find("0.4,0.8,false,0.8") != std::string::npos);

    const auto max = run_cli("scp --phi1 0.5");
    CHECK(max.out.find("0.5,1,true,1") != std::string::npos);
}

TEST_CASE("scp with explicit vectors") {
    const auto r = run_cli("scp --source 0.4,0.35,0.25 --target 0.334,0.333,0.333");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("0.750750750751") != std::string::npos);
}

TEST_CASE("scp rejects out-of-range phi1") {
    CHECK(run_cli("scp --phi1 0.7").exit_code != 0);
    CHECK(run_cli("scp --phi1 -0.1").exit_code != 0);
}

TEST_CASE("identical invocations produce identical bytes") {
    const auto a = run_cli("percolate --phi1 0.4 --L 16 --trials 300 --seed 7");
    const auto b = run_cli("percolate --phi1 0.4 --L 16 --trials 300 --seed 7");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    const auto c = run_cli("percolate --phi1 0.4 --L 16 --trials 300 --seed 8");
    CHECK(a.out != c.out);
    // Thread count must not change the bytes either.
    const auto t1 = run_cli("--threads 1 percolate --phi1 0.4 --L 16 --trials 300 --seed 7");
    const auto t4 = run_cli("--threads 4 percolate --phi1 0.4 --L 16 --trials 300 --seed 7");
    CHECK(t1.out == t4.out);
    CHECK(t1.out == a.out);
}

TEST_CASE("swap verifies against the oracle") {
    const auto r = run_cli("swap --phi1 0.4 --verify");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("average_scp,0.704") != std::string::npos);
    CHECK(r.out.find("oracle_max_deviation") != std::string::npos);

    // The boundary value of the success interval maps to p0 = 1/2.
    const auto crit = run_cli("swap --phi1 0.32635 --format json");
    const auto j = nlohmann::json::parse(crit.out);
    CHECK(std::abs(j["average_scp"].get<double>() - 0.5) <= 1e-4);
}

TEST_CASE("count emits resource rows") {
    const auto r = run_cli("count --l 64 --strategy qep");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("strategy,l,single_qubit,two_qubit,three_qubit") !=
          std::string::npos);
    CHECK(r.out.find("qep,64,") != std::string::npos);
    CHECK(run_cli("count --l 1 --strategy qep").exit_code != 0);
}

TEST_CASE("bad lattice names are usage errors") {
    CHECK(run_cli("threshold --lattice kagome").exit_code != 0);
}

TEST_CASE("out files come with a manifest") {
    const std::string out = "/tmp/qperc_cli_artifact.csv";
    std::remove(out.c_str());
    std::remove((out + ".manifest.json").c_str());
    const auto r =
        run_cli("--out " + out + " percolate --phi1 0.4 --L 16 --trials 200 --seed 3");
    CHECK(r.exit_code == 0);

    std::ifstream body(out);
    REQUIRE(body.good());
    std::string header;
    std::getline(body, header);
    CHECK(header ==
          "lattice,L,p,trials,spanning_fraction,stderr,theta_hat,theta_stderr,seed");

    std::ifstream mf(out + ".manifest.json");
    REQUIRE(mf.good());
    const auto manifest = nlohmann::json::parse(mf);
    CHECK(manifest["subcommand"] == "percolate");
    CHECK(manifest["master_seed"] == 3);
    CHECK(manifest["parameters"]["L"] == 16);
}

TEST_CASE("json output mirrors the csv fields") {
    const auto r = run_cli("percolate --phi1 0.45 --L 16 --trials 200 --format json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["lattice"] == "tri-site");
    CHECK(j["L"] == 16);
    CHECK(j["trials"] == 200);
    CHECK(j.contains("spanning_fraction"));
    CHECK(j.contains("theta_hat"));
}

TEST_CASE("verify subcommand passes") {
    const auto r = run_cli("verify");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("all checks passed") != std::string::npos);
}
