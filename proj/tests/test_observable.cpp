#include <stdexcept>

#include "doctest.h"
#include "plateau/observable.hpp"

using namespace plateau;

TEST_CASE("product grammar round-trips") {
    for (const char* s : {"X:3", "X:2*X:3", "Y:1*Z:4", "Z:10"}) {
        const Observable o = parse_product(s, 10);
        CHECK(canonical(o) == s);
        CHECK(parse_product(canonical(o), 10) == o);
    }
    CHECK(canonical(parse_product("Z:4*Y:1", 4)) == "Y:1*Z:4");
    CHECK(parse_product("X:2*X:3", 4) == Observable::XX(2));
}

TEST_CASE("product grammar errors") {
    CHECK_THROWS_AS(parse_product("", 4), std::invalid_argument);
    CHECK_THROWS_AS(parse_product("Q:1", 4), std::invalid_argument);
    CHECK_THROWS_AS(parse_product("X:0", 4), std::invalid_argument);
    CHECK_THROWS_AS(parse_product("X:5", 4), std::invalid_argument);
    CHECK_THROWS_AS(parse_product("X:1*Z:1", 4), std::invalid_argument);
    CHECK_THROWS_AS(parse_product("X3", 4), std::invalid_argument);
}

TEST_CASE("Hamiltonian presets expand to weighted terms") {
    const auto ising = parse_observable("ising:1.5,0.5", 4);
    REQUIRE(ising.size() == 7);
    int zz = 0, x = 0;
    for (const auto& t : ising) {
        if (t.term.sites().size() == 2) {
            ++zz;
            CHECK(t.coeff == doctest::Approx(-1.5));
        } else {
            ++x;
            CHECK(t.coeff == doctest::Approx(-0.5));
        }
    }
    CHECK(zz == 3);
    CHECK(x == 4);
    const auto heis = parse_observable("heisenberg", 3);
    CHECK(heis.size() == 6);
    for (const auto& t : heis) CHECK(t.coeff == doctest::Approx(0.25));
    CHECK(parse_observable("X:1", 2).size() == 1);
}
