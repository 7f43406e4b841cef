#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#ifndef FSERIES_CLI_PATH
#define FSERIES_CLI_PATH "./fseries_cli"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string tmp = std::string("cli_out_") + std::to_string(rand()) + ".txt";
    std::string cmd = std::string(FSERIES_CLI_PATH) + " " + args + " > " + tmp + " 2>&1";
    int rc = std::system(cmd.c_str());
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(tmp.c_str());
    return {WEXITSTATUS(rc), ss.str()};
}

}  // namespace

TEST_CASE("eval emits self-describing CSV and is deterministic") {
    auto a = run_cli("eval --x rational:2/5 --k 2 --eps 1e-8");
    auto b = run_cli("eval --x rational:2/5 --k 2 --eps 1e-8");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.rfind("# anchor=", 0) == 0);
    CHECK(a.output.find("quantity,value,error_bound,terms") != std::string::npos);
    CHECK(a.output.find("F2,") != std::string::npos);
}

TEST_CASE("json output mirrors the table") {
    auto a = run_cli("eval --x decimal:0.4 --k 2 --eps 1e-8 --out json");
    CHECK(a.exit_code == 0);
    CHECK(a.output.find("\"anchor\"") != std::string::npos);
    CHECK(a.output.find("\"rows\"") != std::string::npos);
}

TEST_CASE("RealSpec grammar shared with the parser") {
    CHECK(run_cli("eval --x cf:[2,2] --eps 1e-8").exit_code == 0);
    auto bad = run_cli("eval --x rational:1/0");
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("error:") != std::string::npos);
    CHECK(run_cli("eval --x cf:[0,2]").exit_code == 1);
    CHECK(run_cli("eval --x nonsense").exit_code == 1);
}

TEST_CASE("cf and brjuno commands run") {
    auto orbit = run_cli("cf --x cf:[1,2,3,4] --depth 4");
    CHECK(orbit.exit_code == 0);
    CHECK(orbit.output.find("k,a_k,p_k,q_k") != std::string::npos);
    auto rep = run_cli("brjuno --x cf:[2,2,2,2,2,2,2,2,2,2,2,2,2,2] --depth 8");
    CHECK(rep.exit_code == 0);
    CHECK(rep.output.find("# star_ok=") != std::string::npos);
}

TEST_CASE("verify --only arith passes and the fault hook trips the anchor") {
    auto clean = run_cli("verify --only arith --out json");
    CHECK(clean.exit_code == 0);
    CHECK(clean.output.find("\"passed\": true") != std::string::npos);

    auto faulty = run_cli("verify --only arith --inject-fault bernoulli --out json");
    CHECK(faulty.exit_code == 1);
    CHECK(faulty.output.find("eisenstein-q-expansion") != std::string::npos);
    CHECK(faulty.output.find("\"passed\": false") != std::string::npos);
}

TEST_CASE("scan-irrational rows carry exact h_n") {
    auto r = run_cli("scan-irrational --x cf:[1,1,1,1,1,1,1,1,1,1,1,1] --n 1 3 --eps 0.1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("n,h_n,dq_f2,dq_g2,err_est") != std::string::npos);
    CHECK(r.output.find("/") != std::string::npos);  // exact rational h_n
}
