#include <random>
#include <set>

#include "doctest.h"
#include "plateau/closed_form.hpp"
#include "plateau/cone.hpp"
#include "plateau/oracle.hpp"
#include "plateau/zx.hpp"

using namespace plateau;

TEST_CASE("qMPS(4) X_2 zero set") {
    const Circuit c = build_ansatz(Family::qMPS, 4);
    std::set<ParamId> zeros;
    for (ParamId p : c.params())
        if (variance_is_zero(c, Observable::X(2), p)) zeros.insert(p);
    // listed cases plus (1,2), an R_Z feeding a control whose X component never returns
    const std::set<ParamId> want{{1, 2}, {1, 3}, {1, 4}, {3, 3}, {3, 4}, {3, 5}, {3, 6},
                                 {4, 1}, {4, 2}, {4, 3}, {4, 4}};
    CHECK(zeros == want);
}

TEST_CASE("cone zeros agree with the exact contraction and cover the listed cases") {
    for (int N = 2; N <= 7; ++N) {
        const Circuit c = build_ansatz(Family::qMPS, N);
        for (int i = 1; i <= N; ++i) {
            const auto tn = zx::contract_variance_all_params(c, Observable::X(i));
            for (const auto& [p, v] : tn) {
                CHECK((v == 0.0) == variance_is_zero(c, Observable::X(i), p));
                if (closed::qmps_listed_zero(N, i, p)) CHECK(v == 0.0);
            }
        }
    }
}

TEST_CASE("light cone of tree circuits") {
    const Circuit c = build_ansatz(Family::qTTN, 8);
    CHECK(light_cone(c, Observable::X(8)).registers == std::set<int>{1, 5, 7, 8});
    CHECK(light_cone(c, Observable::X(1)).registers == std::set<int>{1, 2, 3, 5});
    const Circuit m = build_ansatz(Family::qMERA, 8);
    // register 1 meets no disentangler, so its cone is the tree one
    CHECK(light_cone(m, Observable::X(1)).registers == std::set<int>{1, 2, 3, 5});
    CHECK(light_cone(m, Observable::X(8)).registers.size() > 4);
}

TEST_CASE("restriction keeps the expectation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.14159, 3.14159);
    for (Family f : {Family::qMPS, Family::qTTN, Family::qMERA}) {
        const Circuit c = build_ansatz(f, 8);
        for (const Observable& obs : {Observable::X(3), Observable::XX(5), Observable::Z(8)}) {
            for (bool cone_only : {false, true}) {
                const Restriction r = restrict_to_light_cone(c, obs, cone_only);
                std::vector<double> theta(c.param_count()), sub;
                for (double& t : theta) t = u(rng);
                for (ParamId p : r.original_params) sub.push_back(theta[*c.param_index(p)]);
                CHECK(oracle::expectation(r.circuit, r.observable, sub) ==
                      doctest::Approx(oracle::expectation(c, obs, theta)).epsilon(1e-12));
            }
        }
    }
}
