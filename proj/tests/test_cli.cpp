#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "lls/config.hpp"
#include "lls/sim.hpp"

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(LLS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int count_lines(const std::string& path) {
    std::ifstream f(path);
    int n = 0;
    std::string line;
    while (std::getline(f, line)) ++n;
    return n;
}

const std::string kConfigDir = LLS_CONFIG_DIR;

}  // namespace

TEST_CASE("simulate on the shipped circle scenario succeeds and converges") {
    REQUIRE(run("simulate " + kConfigDir + "/circle_track.cfg -o /tmp/lls_cli_circle") == 0);
    const std::string summary = slurp("/tmp/lls_cli_circle/summary.json");
    CHECK(summary.find("\"converged\": true") != std::string::npos);

    // The CLI is a thin shell: its trace equals the library's own output.
    lls::ConfigFile cfg = lls::ConfigFile::parse_file(kConfigDir + "/circle_track.cfg");
    const lls::RunResult direct = lls::run_scenario(lls::scenario_from_config(cfg));
    lls::write_trace_csv("/tmp/lls_cli_circle/direct.csv", direct.trace);
    CHECK(slurp("/tmp/lls_cli_circle/trace.csv") == slurp("/tmp/lls_cli_circle/direct.csv"));
}

TEST_CASE("simulate accepts overrides") {
    REQUIRE(run("simulate " + kConfigDir +
                "/circle_track.cfg -o /tmp/lls_cli_override --set tracking.K=0.9 "
                "--set run.stance_budget=25") == 0);
    const std::string summary = slurp("/tmp/lls_cli_override/summary.json");
    CHECK(summary.find("\"converged\": true") != std::string::npos);
}

TEST_CASE("simulate rejects invalid configs with exit code 1") {
    std::ofstream bad("/tmp/lls_cli_bad.cfg");
    bad << slurp(kConfigDir + "/circle_track.cfg");
    bad << "\n[legs]\nalpha_min = 1.2\nalpha_max = 0.6\n";
    bad.close();
    CHECK(run("simulate /tmp/lls_cli_bad.cfg -o /tmp/lls_cli_badout") == 1);
    CHECK(run("simulate /tmp/does_not_exist.cfg") == 1);
}

TEST_CASE("sweep writes the tables with one row per grid point") {
    REQUIRE(run("sweep " + kConfigDir + "/sweep_fig56.cfg -o /tmp/lls_cli_sweep") == 0);
    CHECK(count_lines("/tmp/lls_cli_sweep/fig5_q_of_alpha.csv") == 154 + 1);
    CHECK(count_lines("/tmp/lls_cli_sweep/fig6_b_for_q.csv") == 101 + 1);
    CHECK(count_lines("/tmp/lls_cli_sweep/fig4_chord_locus.csv") == 154 + 1);
    // Grid endpoints are present in the fixed-chord table.
    const std::string fig6 = slurp("/tmp/lls_cli_sweep/fig6_b_for_q.csv");
    CHECK(fig6.find("0.52359877559829") != std::string::npos);
    CHECK(fig6.find("1.04719755119659") != std::string::npos);
}

TEST_CASE("sweep rejects an empty grid") {
    std::ofstream bad("/tmp/lls_cli_badsweep.cfg");
    bad << slurp(kConfigDir + "/sweep_fig56.cfg");
    bad << "\n[sweep]\nfig5_samples = 1\n";
    bad.close();
    CHECK(run("sweep /tmp/lls_cli_badsweep.cfg -o /tmp/lls_cli_badsweepout") == 1);
}

TEST_CASE("validate runs a named suite and rejects unknown names") {
    CHECK(run("validate lemma1") == 0);
    CHECK(run("validate no_such_suite") == 1);
}
