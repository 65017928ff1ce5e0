#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gskit/weights.hpp"

using namespace gskit;

TEST_CASE("power family evaluates (base^m x)^p") {
    const auto fam = make_power_family(2.0, 2.0, 5);
    CHECK(fam.member(1)(3.0) == Catch::Approx(36.0));          // (2*3)^2
    CHECK(fam.member(2)(1.0) == Catch::Approx(16.0));          // (4*1)^2
    CHECK(fam.member(3)(0.5) == Catch::Approx(16.0));          // (8*0.5)^2
    CHECK(fam.member(1).convex);
    CHECK(fam.member(1).nondecreasing);
    CHECK(fam.m_max() == 5);
}

TEST_CASE("power family rejects sublinear growth") {
    CHECK_THROWS_AS(make_power_family(1.0, 2.0, 3), Error);
    CHECK_THROWS_AS(make_power_family(0.5, 2.0, 3), Error);
    CHECK_THROWS_AS(make_power_family(2.0, 1.0, 3), Error);
    CHECK_THROWS_AS(make_power_family(2.0, 2.0, 0), Error);
}

TEST_CASE("exp substitution") {
    WeightFunction lin{[](double x) { return x; }, true, true, "x"};
    WeightFunction sq{[](double x) { return x * x; }, true, true, "x^2"};
    WeightFunction logw{[](double x) { return std::log1p(x); }, false, true, "ln(1+x)"};

    CHECK(exp_substitute(lin)(std::log(2.0)) == Catch::Approx(2.0));
    CHECK(exp_substitute(sq)(0.0) == Catch::Approx(1.0));
    // direct-evaluation oracle: ln(1 + e^3)
    CHECK(exp_substitute(logw)(3.0) == Catch::Approx(std::log1p(std::exp(3.0))).epsilon(1e-12));

    CHECK_FALSE(exp_substitute(sq).convex);  // not propagated
    CHECK(exp_substitute(sq).nondecreasing);

    // g[e](ln x) = g(x) to machine-relative tolerance for x >= 1
    std::mt19937_64 rng(0x5EED);
    std::uniform_real_distribution<double> u(1.0, 1e5);
    const auto sqe = exp_substitute(sq);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        CHECK(sqe(std::log(x)) == Catch::Approx(sq(x)).epsilon(1e-12));
    }
}

TEST_CASE("i3 witness vanishes for the doubling power family") {
    const auto fam = make_power_family(2.0, 2.0, 6);
    for (int m = 1; m <= 5; ++m) {
        const auto rep = check_condition(fam, Condition::i3, m, default_verification_grid());
        REQUIRE(rep.pass);
        CHECK(rep.constants.back().first == "a_m");
        CHECK(std::fabs(rep.constants.back().second) <= eps_check(1.0));
    }
}

TEST_CASE("i2 witness matches the dense maximization oracle") {
    const auto fam = make_power_family(2.0, 2.0, 3);
    const auto rep =
        check_condition(fam, Condition::i2, 1, default_verification_grid(), {1.0});
    REQUIRE(rep.pass);
    // Oracle: maximize ln(1+x) - 12 x^2. Stationary point solves 24x^2+24x-1=0;
    // dense-grid evaluation gives 0.0200208 at x = 0.0400617.
    double dense_max = kNegInf;
    for (int i = 0; i <= 2000000; ++i) {
        const double x = 1e-6 * i;
        dense_max = std::fmax(dense_max, std::log1p(x) - 12.0 * x * x);
    }
    CHECK(dense_max == Catch::Approx(0.0200207606).epsilon(1e-6));
    CHECK(rep.constants.back().second == Catch::Approx(dense_max).margin(1e-4));
}

TEST_CASE("i4 and i5 hold with unit constants for base 2, p = 2") {
    const auto fam = make_power_family(2.0, 2.0, 4);
    const auto rep4 =
        check_condition(fam, Condition::i4, 2, default_verification_grid(), {2.0});
    REQUIRE(rep4.pass);
    CHECK(std::fabs(rep4.constants.back().second) <= eps_check(1.0));  // gamma_m = 0

    // 2 * 4^m x^2 <= 4^{m+1} (2x)^2 exactly, so l_m = 0 at h_m = 2
    const auto rep5 =
        check_condition(fam, Condition::i5, 1, default_verification_grid(), {2.0});
    REQUIRE(rep5.pass);
    CHECK(std::fabs(rep5.constants.back().second) <= eps_check(1.0));
}

TEST_CASE("i1 proxy") {
    const auto fam = make_power_family(2.0, 2.0, 2);
    const auto rep = check_condition(fam, Condition::i1, 1, default_verification_grid());
    CHECK(rep.pass);
    CHECK(rep.proxy);

    // phi_m(x) = x has ratio 1 everywhere: linear growth violates i1
    std::vector<WeightFunction> lin(2, WeightFunction{[](double x) { return x; }, true, true, "x"});
    const WeightFamily linear_family(std::move(lin), "linear");
    const auto bad = check_condition(linear_family, Condition::i1, 1, default_verification_grid());
    CHECK_FALSE(bad.pass);
    CHECK(bad.proxy);
}

TEST_CASE("unbounded witness is signalled") {
    // phi_m = x^2 for every m: phi_m(2x) - phi_{m+1}(x) = 3x^2 keeps climbing.
    std::vector<WeightFunction> same(
        3, WeightFunction{[](double x) { return x * x; }, true, true, "x^2"});
    const WeightFamily fam(std::move(same), "constant-in-m");
    CHECK_THROWS_AS(check_condition(fam, Condition::i3, 1, default_verification_grid()), Error);
    try {
        check_condition(fam, Condition::i3, 1, default_verification_grid());
    } catch (const Error& e) {
        CHECK(e.kind() == "unbounded-witness");
    }
}

TEST_CASE("passing witnesses survive fresh random points") {
    const auto fam = make_power_family(2.0, 2.0, 4);
    std::mt19937_64 rng(0x5EED);
    std::uniform_real_distribution<double> u(0.0, 1e3);

    const double a_m = fam.witness_i3(1);
    const double C11 = fam.witness_i2(1, 1.0);
    const double l_m = fam.witness_i5(1, 2.0);
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng);
        const double m3 = fam.member(2)(x) + a_m - fam.member(1)(2.0 * x);
        const double m2 = fam.member(2)(x) + C11 - fam.member(1)(x) - std::log1p(x);
        const double m5 = fam.member(2)(2.0 * x) + l_m - 2.0 * fam.member(1)(x);
        const double scale = fam.member(2)(x);
        CHECK(m3 >= -10.0 * eps_check(scale));
        CHECK(m2 >= -10.0 * eps_check(scale));
        CHECK(m5 >= -10.0 * eps_check(scale));
    }
}

TEST_CASE("table family interpolates and extrapolates linearly") {
    const auto fam = make_table_family({0.0, 1.0, 2.0}, {{0.0, 1.0, 4.0}, {0.0, 2.0, 8.0}});
    CHECK(fam.member(1)(0.5) == Catch::Approx(0.5));
    CHECK(fam.member(1)(1.5) == Catch::Approx(2.5));
    CHECK(fam.member(2)(3.0) == Catch::Approx(14.0));  // slope 6 past the end
    CHECK(fam.m_max() == 2);
}
