#include "doctest.h"
#include "json.hpp"
#include "plateau/circuit.hpp"

using namespace plateau;

TEST_CASE("parameter counts follow the recursive definitions") {
    for (int N = 2; N <= 12; ++N) {
        const Circuit c = build_ansatz(Family::qMPS, N);
        CHECK(c.param_count() == static_cast<std::size_t>(6 * (N - 2) + 8));
        CHECK(c.param_count() == expected_param_count(Family::qMPS, N));
        CHECK(c.cnot_count() == static_cast<std::size_t>(N - 1));
    }
    const std::size_t ttn[] = {8, 20, 44, 92};
    const std::size_t mera[] = {8, 24, 56, 120};
    for (int n = 1; n <= 4; ++n) {
        const int N = 1 << n;
        CHECK(build_ansatz(Family::qTTN, N).param_count() == ttn[n - 1]);
        CHECK(expected_param_count(Family::qTTN, N) == ttn[n - 1]);
        CHECK(build_ansatz(Family::qMERA, N).param_count() == mera[n - 1]);
        CHECK(expected_param_count(Family::qMERA, N) == mera[n - 1]);
        CHECK(build_ansatz(Family::qTTN, N).cnot_count() == static_cast<std::size_t>(N - 1));
    }
}

TEST_CASE("two-qubit block is shared by all three families") {
    const Circuit a = build_ansatz(Family::qMPS, 2);
    const Circuit b = build_ansatz(Family::qTTN, 2);
    const Circuit c = build_ansatz(Family::qMERA, 2);
    REQUIRE(a.gates().size() == b.gates().size());
    REQUIRE(a.gates().size() == c.gates().size());
    for (std::size_t g = 0; g < a.gates().size(); ++g) {
        CHECK(a.gates()[g].kind == b.gates()[g].kind);
        CHECK(a.gates()[g].kind == c.gates()[g].kind);
        CHECK(a.gates()[g].param == c.gates()[g].param);
    }
}

TEST_CASE("ParamId numbering is per register in circuit order") {
    const Circuit c = build_ansatz(Family::qMPS, 4);
    CHECK(c.params().front() == ParamId{1, 1});
    // interior registers carry six rotations, the ends four
    for (int j = 1; j <= 4; ++j) {
        const int last = (j == 1 || j == 4) ? 4 : 6;
        CHECK(c.gate_of({j, last}).has_value());
        CHECK_FALSE(c.gate_of({j, last + 1}).has_value());
    }
    const Gate& g = c.gates()[*c.gate_of({2, 1})];
    CHECK(g.kind == GateKind::RX);
    CHECK(g.wire == 2);
    CHECK(to_string(ParamId{3, 5}) == "3,5");
    CHECK(ParamId{1, 4} < ParamId{2, 1});
}

TEST_CASE("builders reject bad sizes") {
    CHECK_THROWS_AS(build_ansatz(Family::qMPS, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_ansatz(Family::qTTN, 6), std::invalid_argument);
    CHECK_THROWS_AS(build_ansatz(Family::qMERA, 1), std::invalid_argument);
    CHECK_THROWS_AS(parse_family("peps"), std::invalid_argument);
    CHECK(parse_family("qmera") == Family::qMERA);
    CHECK(log2_exact(16) == 4);
    CHECK_FALSE(is_power_of_two(12));
}

TEST_CASE("circuit JSON") {
    const auto j = nlohmann::json::parse(to_json(build_ansatz(Family::qTTN, 4)));
    CHECK(j["family"] == "qTTN");
    CHECK(j["n_qubits"] == 4);
    REQUIRE(j["gates"].size() == build_ansatz(Family::qTTN, 4).gates().size());
    std::size_t rotations = 0;
    for (const auto& g : j["gates"]) {
        if (g["kind"] == "CNOT") {
            CHECK(g["targets"].size() == 2);
            CHECK(g["param"].is_null());
        } else {
            CHECK(g["targets"].size() == 1);
            CHECK(g["param"].size() == 2);
            ++rotations;
        }
    }
    CHECK(rotations == 20);
    const auto first = j["gates"][0];
    CHECK(first["kind"] == "RX");
    CHECK(first["param"] == nlohmann::json::array({1, 1}));
}

TEST_CASE("custom circuits are validated") {
    std::vector<Gate> gates{{GateKind::RX, 1, 0, {}, 0}, {GateKind::CNOT, 1, 3, {}, 0}};
    CHECK_THROWS(Circuit(Family::custom, 2, gates));
    gates[1].target = 2;
    const Circuit c(Family::custom, 2, gates);
    CHECK(c.param_count() == 1);
    CHECK(c.params()[0] == ParamId{1, 1});
}
