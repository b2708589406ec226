#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args, const std::string& capture = "/tmp/mvn_cli_out.txt") {
    const std::string cmd = std::string(MVN_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("verify: all checks zero, exit 0") {
    CHECK(run("verify") == 0);
    const std::string out = slurp("/tmp/mvn_cli_out.txt");
    CHECK(out.find("NONZERO") == std::string::npos);
    CHECK(out.find("compatibility(plus)") != std::string::npos);
    CHECK(out.find("flux(n=2,simpler)") != std::string::npos);
    int zero_rows = 0;
    for (std::size_t at = out.find(" ZERO"); at != std::string::npos;
         at = out.find(" ZERO", at + 1))
        ++zero_rows;
    CHECK(zero_rows == 11);  // the table always lists every check
}

TEST_CASE("verify --perturb V12: nonzero residuals, exit 1") {
    CHECK(run("verify --perturb V12") == 1);
    CHECK(slurp("/tmp/mvn_cli_out.txt").find("NONZERO") != std::string::npos);
}

TEST_CASE("verify --emit writes canonical operator files") {
    fs::remove_all("/tmp/mvn_emit");
    CHECK(run("verify --emit /tmp/mvn_emit") == 0);
    CHECK(fs::exists("/tmp/mvn_emit/A2_plus.op"));
    CHECK(fs::exists("/tmp/mvn_emit/flow2.poly"));
    const std::string l = slurp("/tmp/mvn_emit/L.op");
    CHECK(l.find("[[") != std::string::npos);
}

TEST_CASE("evolve: config run, overrides, error paths") {
    std::ofstream cfg("/tmp/mvn_flow1.cfg");
    cfg << "[grid]\nn = 32\n[flow]\nn_flow = 1\nsteps = 3\n"
        << "[ic]\nkind = cosine\namplitude = 0.1\n[output]\ndir = /tmp/mvn_cli_run\n";
    cfg.close();
    fs::remove_all("/tmp/mvn_cli_run");
    CHECK(run("evolve --config /tmp/mvn_flow1.cfg") == 0);
    CHECK(fs::exists("/tmp/mvn_cli_run/diagnostics.csv"));

    fs::remove_all("/tmp/mvn_cli_run");
    CHECK(run("evolve --config /tmp/mvn_flow1.cfg --steps 0") == 0);
    CHECK(fs::exists("/tmp/mvn_cli_run/snapshot_000000.field"));
    CHECK_FALSE(fs::exists("/tmp/mvn_cli_run/snapshot_000003.field"));

    CHECK(run("evolve --config /tmp/mvn_does_not_exist.cfg") == 2);

    std::ofstream bad("/tmp/mvn_bad.cfg");
    bad << "[flow]\nscheme = leapfrog\n";
    bad.close();
    CHECK(run("evolve --config /tmp/mvn_bad.cfg") == 2);

    // a wildly unstable step must abort with the blow-up exit code
    CHECK(run("evolve --config /tmp/mvn_flow1.cfg --dt 1000 --steps 50 "
              "--scheme rk4 --out /tmp/mvn_blowup") == 1);
}

TEST_CASE("induce: builtin plane and sphere") {
    fs::remove_all("/tmp/mvn_plane.obj");
    CHECK(run("induce --builtin plane --out /tmp/mvn_plane.obj --report /tmp/mvn_plane.csv") ==
          0);
    CHECK(fs::exists("/tmp/mvn_plane.obj"));
    const std::string report = slurp("/tmp/mvn_plane.csv");
    CHECK(report.find("metric,value") != std::string::npos);
    CHECK(report.find("willmore_geometric") != std::string::npos);

    CHECK(run("induce --input /tmp/mvn_no_such_dir") == 2);
    CHECK(run("induce") == 2);
}

TEST_CASE("induce: spinor files from disk") {
    // Round trip through the CLI: write plane spinor fields and induce.
    fs::create_directories("/tmp/mvn_spinors");
    std::ofstream p1("/tmp/mvn_spinors/psi1.field");
    const int n = 64;
    p1 << "# n=" << n << " length=2 kind=complex chart=open xmin=-1 xmax=1 ymin=-1 ymax=1\n";
    const double r = 0.7071067811865476;  // sqrt(i) = (1+i)/sqrt 2
    for (int k = 0; k < n * n; ++k) p1 << r << " " << r << "\n";
    p1.close();
    std::ofstream p2("/tmp/mvn_spinors/psi2.field");
    p2 << "# n=" << n << " length=2 kind=complex chart=open xmin=-1 xmax=1 ymin=-1 ymax=1\n";
    for (int k = 0; k < n * n; ++k) p2 << "0 0\n";
    p2.close();
    CHECK(run("induce --input /tmp/mvn_spinors --out /tmp/mvn_spl.obj") == 0);
    CHECK(fs::exists("/tmp/mvn_spl.obj"));
}

TEST_CASE("verify accepts operator definitions from files") {
    fs::remove_all("/tmp/mvn_emit2");
    REQUIRE(run("verify --emit /tmp/mvn_emit2") == 0);
    // feed the canonical dumps back in: still all zero
    CHECK(run("verify --A2 /tmp/mvn_emit2/A2_plus.op --B2 /tmp/mvn_emit2/B2_plus.op "
              "--flow /tmp/mvn_emit2/flow2.poly") == 0);
    // a wrong flow polynomial must break compatibility
    std::ofstream bad("/tmp/mvn_badflow.poly");
    bad << "d(p,5)\n";
    bad.close();
    CHECK(run("verify --flow /tmp/mvn_badflow.poly") == 1);
    CHECK(run("verify --A2 /tmp/mvn_no_such.op") == 2);
}

TEST_CASE("dbar-test self-check") {
    CHECK(run("dbar-test") == 0);
    const std::string out = slurp("/tmp/mvn_cli_out.txt");
    CHECK(out.find("FAIL") == std::string::npos);
}
