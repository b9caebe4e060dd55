#include <cmath>

#include "doctest.h"
#include "plateau/closed_form.hpp"
#include "plateau/zx.hpp"

using namespace plateau;

TEST_CASE("last-site qMPS form") {
    for (int N = 2; N <= 10; ++N) {
        const double want = 0.25 * std::pow(3.0 / 8.0, N - 1);
        CHECK(*closed::var_qmps(N, N, {1, 1}) == doctest::Approx(want).epsilon(1e-14));
        CHECK(zx::contract_variance_tn(Family::qMPS, N, Observable::X(N), {1, 1}) ==
              doctest::Approx(want).epsilon(1e-12));
    }
    CHECK(*closed::var_qmps(3, 3, {1, 1}) == 9.0 / 256.0);
}

TEST_CASE("qMPS coverage and zero list") {
    CHECK_FALSE(closed::var_qmps(5, 3, {2, 2}).has_value());
    CHECK(*closed::var_qmps(5, 3, {5, 1}) == 0.0);
    CHECK(closed::qmps_listed_zero(5, 3, {4, 3}));
    CHECK_FALSE(closed::qmps_listed_zero(5, 3, {4, 2}));
    CHECK(closed::qmps_listed_zero(5, 3, {1, 3}));
    CHECK(closed::qmps_listed_zero(5, 3, {2, 5}));
    CHECK_THROWS_AS(closed::var_qmps(4, 5, {1, 1}), std::out_of_range);
    CHECK_THROWS_AS(closed::var_qmps(4, 2, {1, 5}), std::out_of_range);
}

TEST_CASE("branches without an additive constant agree with the contraction") {
    for (int N = 3; N <= 8; ++N) {
        const Circuit c = build_ansatz(Family::qMPS, N);
        for (int i = 2; i <= N; ++i)
            for (int j = 1; j < i; ++j)
                CHECK(zx::contract_variance_tn(c, Observable::X(i), {j, 1}) ==
                      doctest::Approx(*closed::var_qmps(N, i, {j, 1})).epsilon(1e-12));
    }
}

TEST_CASE("middle X_i X_{i+1} coefficient agrees with the contraction") {
    for (int N = 4; N <= 7; ++N)
        for (int i = 2; i <= N - 2; ++i)
            CHECK(zx::contract_variance_tn(Family::qMPS, N, Observable::XX(i), {1, 1}) ==
                  doctest::Approx(closed::var_qmps_xx(N, i)).epsilon(1e-12));
}

TEST_CASE("qTTN transfer matrix") {
    const auto& q = closed::qttn_transfer();
    CHECK(q.lambda1 == doctest::Approx(0.4313).epsilon(1e-4));
    CHECK(q.lambda2 == doctest::Approx(2.3187).epsilon(1e-4));
    CHECK((q.M * q.w2 - q.lambda2 * q.w2).norm() < 1e-12);
    for (int n = 1; n <= 4; ++n) {
        const int N = 1 << n;
        CHECK(closed::var_qttn_xn(n) == doctest::Approx(zx::contract_variance_tn(Family::qTTN, N, Observable::X(N), {1, 1})).epsilon(1e-12));
        CHECK(closed::var_qttn_x1(n) == doctest::Approx(zx::contract_variance_tn(Family::qTTN, N, Observable::X(1), {1, 1})).epsilon(1e-12));
    }
    // dominant eigen-component approaches the exact value
    const double r4 = closed::var_qttn_x1_asymptotic(4) / closed::var_qttn_x1(4);
    const double r8 = closed::var_qttn_x1_asymptotic(8) / closed::var_qttn_x1(8);
    CHECK(std::abs(r8 - 1.0) < std::abs(r4 - 1.0));
    CHECK(std::abs(r8 - 1.0) < 1e-3);
}

TEST_CASE("bounds, tails and fits") {
    CHECK(closed::var_qmera_lower(2) == doctest::Approx(0.25 * std::pow(0.375, 4)));
    CHECK(*closed::klocal_lower_bound(Family::qTTN, 8, 2) == doctest::Approx(0.25 * std::pow(0.375, 6)));
    CHECK(*closed::klocal_lower_bound(Family::qMERA, 8, 1) == doctest::Approx(0.25 * std::pow(0.375, 6)));
    CHECK_FALSE(closed::klocal_lower_bound(Family::qMPS, 8, 1).has_value());
    CHECK(closed::chebyshev_tail(0.01, 0.5) == doctest::Approx(0.04));
    CHECK(closed::chebyshev_tail(1.0, 0.1) == 1.0);
    CHECK_THROWS_AS(closed::chebyshev_tail(0.1, 0.0), std::invalid_argument);

    const auto f = closed::fit_power_law({{2, 3.0 * std::pow(2, -1.5)}, {4, 3.0 * std::pow(4, -1.5)}, {8, 3.0 * std::pow(8, -1.5)}});
    CHECK(f.exponent == doctest::Approx(-1.5));
    CHECK(f.prefactor == doctest::Approx(3.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK_THROWS_AS(closed::fit_power_law({{2, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(closed::fit_power_law({{2, 1.0}, {2, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(closed::fit_power_law({{2, 1.0}, {4, 0.0}}), std::invalid_argument);

    CHECK(closed::qmera_reference(2).second == doctest::Approx(0.1719));
    CHECK_THROWS_AS(closed::qmera_reference(32), std::out_of_range);
}
