#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code;
    std::string output;
};

// run the built CLI, capturing stdout+stderr
RunResult run_cli(const std::string& args) {
    const fs::path tmp = fs::temp_directory_path() / "fhsc_cli_capture.txt";
    const std::string cmd = std::string(FHSC_CLI_PATH) + " " + args + " > " +
                            tmp.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream f(tmp);
    std::ostringstream os;
    os << f.rdbuf();
    int code = -1;
    if (WIFEXITED(status)) code = WEXITSTATUS(status);
    return {code, os.str()};
}

std::string out_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    return p.string();
}

const std::string kGolden =
    std::string(FHSC_SOURCE_DIR) + "/data/golden/published_table_alpha_0.001.csv";

} // namespace

TEST_CASE("cli: table refuses without a mapping") {
    RunResult r = run_cli("table --out " + out_dir("cli_t0"));
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("calibrate") != std::string::npos);
}

TEST_CASE("cli: calibrate then table") {
    const std::string dir = out_dir("cli_flow");
    RunResult cal = run_cli("calibrate --target " + kGolden + " --out " + dir);
    REQUIRE(cal.exit_code == 0);
    CHECK(cal.output.find("NOT-REPRODUCED") != std::string::npos);
    CHECK(cal.output.find("best: convention=unitless A=+e2 D=De") != std::string::npos);
    REQUIRE(fs::exists(dir + "/mapping.json"));
    REQUIRE(fs::exists(dir + "/calibration.json"));

    RunResult tab = run_cli("table --mapping " + dir + "/mapping.json --out " + dir);
    REQUIRE(tab.exit_code == 0);
    for (const char* a : {"0.001", "0.05", "0.1"})
        CHECK(fs::exists(dir + "/table_alpha_" + std::string(a) + ".csv"));

    // determinism: re-emission is byte-identical
    auto slurp = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream os;
        os << f.rdbuf();
        return os.str();
    };
    const std::string before = slurp(dir + "/table_alpha_0.05.csv");
    REQUIRE(run_cli("table --mapping " + dir + "/mapping.json --out " + dir).exit_code == 0);
    CHECK(slurp(dir + "/table_alpha_0.05.csv") == before);
}

TEST_CASE("cli: figure-data validates the figure name") {
    RunResult bad = run_cli("figure-data not_a_figure --out " + out_dir("cli_f0"));
    CHECK(bad.exit_code == 2);

    const std::string dir = out_dir("cli_f1");
    RunResult ok = run_cli("figure-data potential_vs_t --molecule CO --out " + dir);
    REQUIRE(ok.exit_code == 0);
    CHECK(fs::exists(dir + "/figure_potential_vs_t_CO.csv"));
}

TEST_CASE("cli: spectrum prints NU intermediates") {
    RunResult r = run_cli("spectrum --molecule CO --alpha 0.05 --nmax 2");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("molecule,alpha,n,Pn,eps1,eps2,eps3,invQ,lambda_n") != std::string::npos);
    CHECK(r.output.find("CO,0.05,0,1.476167459") != std::string::npos);
}

TEST_CASE("cli: wavefunction emits a sampled CSV") {
    const std::string dir = out_dir("cli_w");
    RunResult r = run_cli("wavefunction --molecule CO --alpha 0.05 --n 1 --points 64 --out " + dir);
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir + "/wavefunction_CO_n1_alpha_0.05.csv"));
}

TEST_CASE("cli: verify runs the minimal 12-entry report") {
    const std::string dir = out_dir("cli_v");
    RunResult r = run_cli("verify --nmax 0 --wavefn-levels 1 --oracle-points 4096 --out " + dir);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("all contracts hold") != std::string::npos);
    nlohmann::json j;
    std::ifstream f(dir + "/verify.json");
    f >> j;
    CHECK(j["entries"].size() == 12);  // 4 molecules x 3 alphas x n=0
    CHECK(j["pass"] == true);
}

TEST_CASE("cli: unknown subcommand and bad flags exit 2") {
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("table --format yaml").exit_code == 2);
}

TEST_CASE("cli: config file drives the run") {
    const std::string dir = out_dir("cli_cfg");
    fs::create_directories(dir);
    {
        std::ofstream f(dir + "/run.cfg");
        f << "# single-alpha json run\n"
             "alpha_inverse_timeunit = 0.02\n"
             "n_max = 1\n"
             "output_format = json\n"
             "output_dir = " << dir << "\n";
    }
    RunResult r = run_cli("table --config " + dir + "/run.cfg --mapping best-fit");
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir + "/table_alpha_0.02.json"));
    nlohmann::json j;
    std::ifstream f(dir + "/table_alpha_0.02.json");
    f >> j;
    CHECK(j["Pn_ev_per_c"]["CO"].size() == 2);

    RunResult bad = run_cli("table --config " + dir + "/missing.cfg --mapping best-fit");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: verify reports solver failure as exit 4 on a hopeless grid") {
    const std::string dir = out_dir("cli_v4");
    RunResult r = run_cli("verify --molecule CO --alpha 0.05 --nmax 9 --oracle-points 64 --out " +
                          dir);
    CHECK(r.exit_code == 4);
    CHECK(r.output.find("solver failure") != std::string::npos);
}

TEST_CASE("cli: verify reports a contract breach as exit 3") {
    // coarse enough that the extrapolated error exceeds 1e-6, fine enough
    // that the refinement-shift gate still passes
    const std::string dir = out_dir("cli_v3");
    RunResult r = run_cli(
        "verify --molecule CO --alpha 0.05 --nmax 9 --oracle-points 512 --wavefn-levels 0 --out " +
        dir);
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("contract breach") != std::string::npos);
}
