#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = plateau::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string kHeader = "ansatz,n_qubits,observable,param_j,param_k,method,variance,stderr,samples,seed,ms\n";

}  // namespace

TEST_CASE("variance, tn") {
    const Run r = run({"variance", "--ansatz", "qmps", "--qubits", "3", "--observable", "X:3", "--param", "1,1",
                       "--method", "tn"});
    CHECK(r.code == 0);
    CHECK(r.out == kHeader + "qMPS,3,X:3,1,1,tn,0.03515625,0,0,0,0\n");
}

TEST_CASE("methods agree on a small instance") {
    for (const char* m : {"tn", "closed", "grid"}) {
        const Run r = run({"variance", "--ansatz", "qttn", "--qubits", "4", "--observable", "X:4", "--param", "1,1",
                           "--method", m, "--format", "json"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        REQUIRE(j.size() == 1);
        CHECK(j[0]["variance"].get<double>() == doctest::Approx(0.03515625).epsilon(1e-10));
        CHECK(j[0]["method"] == m);
        CHECK(j[0].size() == 11);
    }
}

TEST_CASE("last-register placeholder") {
    const Run r = run({"variance", "--ansatz", "qmera", "--qubits", "16", "--observable", "X:N", "--param", "1,1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("qMERA,16,X:16,1,1,tn,") != std::string::npos);
}

TEST_CASE("usage errors name the flag") {
    struct Case {
        std::vector<std::string> args;
        const char* flag;
    };
    const Case cases[] = {
        {{"variance", "--ansatz", "qmps", "--qubits", "4", "--observable", "X:1", "--param", "9,1"}, "--param"},
        {{"variance", "--ansatz", "qmps", "--qubits", "4", "--observable", "X:9", "--param", "1,1"}, "--observable"},
        {{"variance", "--ansatz", "qttn", "--qubits", "6", "--observable", "X:1", "--param", "1,1"}, "--qubits"},
        {{"variance", "--ansatz", "peps", "--qubits", "4", "--observable", "X:1", "--param", "1,1"}, "--ansatz"},
        {{"variance", "--ansatz", "qmps", "--qubits", "4", "--observable", "X:1", "--param", "1,1", "--method", "x"},
         "--method"},
        {{"variance", "--ansatz", "qmps", "--qubits", "4", "--observable", "X:1", "--param", "1,1", "--format", "xml"},
         "--format"},
        {{"variance", "--ansatz", "qmps", "--qubits", "4", "--observable", "X:3", "--param", "2,3", "--method",
          "closed"},
         "--method"},
        {{"variance", "--ansatz", "qmps", "--qubits", "16", "--observable", "X:16", "--param", "1,1", "--method",
          "grid"},
         "--method"},
        {{"variance", "--ansatz", "qmps", "--qubits", "4", "--observable", "X:1", "--param", "1,1", "--samples", "1"},
         "--samples"},
        {{"scan", "--ansatz", "qmps", "--observable", "X:1", "--param", "1,1"}, "--qubits-range"},
        {{"scan", "--ansatz", "qmps", "--qubits", "4", "--observable", "X:1", "--all-params", "--fit"}, "--fit"},
        {{"verify", "--level", "slow"}, "--level"},
        {{"variance", "--ansatz", "qmps", "--observable", "X:1", "--param", "1,1"}, "--qubits"},
    };
    for (const Case& c : cases) {
        const Run r = run(c.args);
        CHECK(r.code == 2);
        CHECK_MESSAGE(r.err.find(c.flag) != std::string::npos, r.err);
        CHECK(r.out.empty());
    }
}

TEST_CASE("identical flags and seed give identical bytes") {
    const std::vector<std::string> a{"scan",   "--ansatz", "qmps", "--qubits-range", "3..5", "--observable",
                                     "X:N",    "--param",  "1,1",  "--method",       "mc",   "--samples",
                                     "3000",   "--seed",   "17"};
    const Run x = run(a), y = run(a);
    CHECK(x.code == 0);
    CHECK(x.out == y.out);
    auto b = a;
    b.back() = "18";
    CHECK(run(b).out != x.out);
}

TEST_CASE("PLATEAU_SEED supplies the default seed") {
    const std::vector<std::string> a{"variance", "--ansatz", "qmps", "--qubits", "3", "--observable", "X:3",
                                     "--param",  "1,1",      "--method", "mc", "--samples", "500"};
    ::setenv("PLATEAU_SEED", "42", 1);
    const Run env = run(a);
    ::unsetenv("PLATEAU_SEED");
    auto b = a;
    b.insert(b.end(), {"--seed", "42"});
    const Run flag = run(b);
    CHECK(env.code == 0);
    CHECK(env.out == flag.out);
    CHECK(env.out.find(",500,42,") != std::string::npos);
    ::setenv("PLATEAU_SEED", "abc", 1);
    CHECK(run(a).code == 2);
    ::unsetenv("PLATEAU_SEED");
}

TEST_CASE("scan over N follows the last-site form") {
    const Run r = run({"scan", "--ansatz", "qmps", "--qubits-range", "2..10", "--observable", "X:N", "--param", "1,1",
                       "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 9);
    for (const auto& row : j) {
        const int n = row["n_qubits"];
        CHECK(row["variance"].get<double>() == doctest::Approx(0.25 * std::pow(0.375, n - 1)).epsilon(1e-12));
    }
}

TEST_CASE("scan with fit") {
    const Run r = run({"scan", "--ansatz", "qmps", "--qubits-range", "2..8", "--observable", "X:N", "--param", "1,1",
                       "--fit"});
    REQUIRE(r.code == 0);
    const auto pos = r.out.find("# fit axis=n_qubits points=7 exponent=");
    CHECK(pos != std::string::npos);
    const Run j = run({"scan", "--ansatz", "qmps", "--qubits-range", "2..8", "--observable", "X:N", "--param", "1,1",
                       "--fit", "--format", "json"});
    const auto arr = nlohmann::json::parse(j.out);
    CHECK(arr.back().contains("exponent"));
    CHECK(arr.back()["fit_points"] == 7);
}

TEST_CASE("site sweep and all-params sweep") {
    const Run s = run({"scan", "--ansatz", "qmps", "--qubits", "5", "--site-range", "1..4", "--observable",
                       "X:i*X:i+1", "--param", "1,1"});
    REQUIRE(s.code == 0);
    CHECK(s.out.find("X:3*X:4") != std::string::npos);
    std::istringstream lines(s.out);
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) ++n;
    CHECK(n == 5);

    const Run a = run({"scan", "--ansatz", "qmps", "--qubits", "4", "--observable", "X:2", "--all-params"});
    REQUIRE(a.code == 0);
    std::istringstream rows(a.out);
    std::getline(rows, line);
    CHECK(line + "\n" == kHeader);
    int total = 0;
    while (std::getline(rows, line)) ++total;
    CHECK(total == 20);
}

TEST_CASE("closed method inside a sweep skips uncovered instances") {
    const Run a = run({"scan", "--ansatz", "qmps", "--qubits", "4", "--observable", "X:2", "--all-params", "--method",
                       "closed"});
    CHECK(a.code == 0);
    CHECK(a.err.find("skipped") != std::string::npos);
}

TEST_CASE("Hamiltonian presets give one row per term, sorted") {
    const Run r = run({"variance", "--ansatz", "qmps", "--qubits", "4", "--observable", "heisenberg", "--param",
                       "1,1", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.size() == 9);
    CHECK(j[0]["observable"] == "X:1*X:2");
    const Run single = run({"variance", "--ansatz", "qmps", "--qubits", "4", "--observable", "X:1*X:2", "--param",
                            "1,1", "--format", "json"});
    const auto s = nlohmann::json::parse(single.out);
    CHECK(j[0]["variance"].get<double>() == doctest::Approx(s[0]["variance"].get<double>() / 16.0));
}

TEST_CASE("output file") {
    const std::string path = "cli_test_out.csv";
    const Run r = run({"variance", "--ansatz", "qmps", "--qubits", "3", "--observable", "X:3", "--param", "1,1",
                       "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == kHeader + "qMPS,3,X:3,1,1,tn,0.03515625,0,0,0,0\n");
    std::remove(path.c_str());
}

TEST_CASE("verify fast passes") {
    const Run r = run({"verify", "--level", "fast"});
    CHECK(r.code == 0);
    CHECK(r.out.find("zx/m_down_from_block,") != std::string::npos);
    CHECK(r.out.find("fail=0") != std::string::npos);
}
