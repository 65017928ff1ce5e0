#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "gskit/functions.hpp"

using namespace gskit;

namespace {

HermiteGaussian gaussian1d(double a) {
    HermiteGaussian f;
    f.n = 1;
    f.decay = {a};
    f.terms[{0}] = 1.0;
    return f;
}

HermiteGaussian gaussian2d() {
    HermiteGaussian f;
    f.n = 2;
    f.decay = {1.0, 1.0};
    f.terms[{0, 0}] = 1.0;
    return f;
}

}  // namespace

TEST_CASE("evaluation of e^{-z^2} off the real axis") {
    const auto f = gaussian1d(1.0);
    CHECK(std::abs(eval(f, {Complex(0.0, 1.0)}) - Complex(std::exp(1.0), 0.0)) < 1e-14);

    HermiteGaussian zf = gaussian1d(1.0);
    zf.terms.clear();
    zf.terms[{1}] = 1.0;
    CHECK(std::abs(eval(zf, {Complex(0.0, 0.0)})) == 0.0);

    // e^{-(1+i)^2} = e^{-2i}: unit modulus
    const Complex v = eval(f, {Complex(1.0, 1.0)});
    CHECK(std::abs(v) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(v.real() == Catch::Approx(std::cos(2.0)).margin(1e-14));
    CHECK(v.imag() == Catch::Approx(-std::sin(2.0)).margin(1e-14));
}

TEST_CASE("closed-form derivatives follow the Hermite recurrence") {
    const auto f = gaussian1d(1.0);
    const auto d1 = derivative_closed_form(f, {1});
    // -2x e^{-x^2}
    CHECK(d1.terms.at({1}).real() == Catch::Approx(-2.0));
    CHECK(d1.terms.size() == 1);

    const auto d2 = derivative_closed_form(f, {2});
    // (4x^2 - 2) e^{-x^2}
    CHECK(d2.terms.at({0}).real() == Catch::Approx(-2.0));
    CHECK(d2.terms.at({2}).real() == Catch::Approx(4.0));

    const auto g2 = gaussian2d();
    const auto dxy = derivative_closed_form(g2, {1, 1});
    // 4 x1 x2 e^{-x1^2-x2^2}
    CHECK(dxy.terms.at({1, 1}).real() == Catch::Approx(4.0));
    CHECK(dxy.terms.size() == 1);
}

TEST_CASE("derivative coefficient overflow is signalled") {
    const auto f = gaussian1d(40.0);
    DerivativeTable table(f, 400);
    bool threw = false;
    try {
        for (int k = 0; k <= 400; ++k) table.poly(MultiIndex{k});
    } catch (const Error& e) {
        threw = true;
        CHECK(e.kind() == "coefficient-overflow");
    }
    CHECK(threw);
}

TEST_CASE("contour derivatives match the closed form") {
    const auto f = gaussian1d(1.0);
    ContourSpec spec{{0.0}, 1.0, 64};
    const Complex d2 = cauchy_derivative(f, spec, {2});
    CHECK(std::abs(d2 - Complex(-2.0, 0.0)) < 1e-12);
    const Complex d1 = cauchy_derivative(f, spec, {1});
    CHECK(std::abs(d1) < 1e-12);

    const auto g2 = gaussian2d();
    ContourSpec spec2{{0.0, 0.0}, 1.0, 64};
    CHECK(std::abs(cauchy_derivative(g2, spec2, {1, 1})) < 1e-12);

    CHECK_THROWS_AS(cauchy_derivative(f, ContourSpec{{0.0}, 1.0, 32}, {12}), Error);
}

TEST_CASE("contour quadrature: randomized oracle agreement and radius independence") {
    std::mt19937_64 rng(0x5EED);
    std::uniform_real_distribution<double> ua(0.5, 2.0);
    std::uniform_real_distribution<double> ux(-1.5, 1.5);
    std::uniform_int_distribution<int> uk(0, 12);

    for (int trial = 0; trial < 20; ++trial) {
        HermiteGaussian f = gaussian1d(ua(rng));
        if (trial % 3 == 1) f.terms[{1}] = 0.7;
        if (trial % 3 == 2) f.terms[{2}] = Complex(0.3, 0.1);
        DerivativeTable table(f, 16);
        const double x = ux(rng);
        const int k = uk(rng);
        const Complex exact = table.value({k}, {x});
        Complex by_radius[3];
        int i = 0;
        for (double R : {0.5, 1.0, 2.0}) {
            ContourSpec spec{{x}, R, 64};
            const Complex est = cauchy_derivative(f, spec, {k});
            by_radius[i++] = est;
            const double scale = std::fmax(std::abs(exact), 1e-6);
            CHECK(std::abs(est - exact) / scale < 1e-9);
        }
        const double scale = std::fmax(std::abs(by_radius[1]), 1e-6);
        CHECK(std::abs(by_radius[0] - by_radius[2]) / scale < 1e-8);
    }
}

TEST_CASE("taylor extension converges to direct evaluation") {
    const auto f = gaussian1d(1.0);
    DerivativeEvaluator table(f, 80);

    // x = 0, y = 0.5: e^{+0.25}
    const auto r = taylor_extend(table, {0.0}, {0.5}, 40);
    CHECK(std::abs(r.value - Complex(std::exp(0.25), 0.0)) < 1e-10);

    // y = 0 returns f(x) exactly once the polynomial degree is exhausted
    const auto r0 = taylor_extend(table, {0.7}, {0.0}, 0);
    CHECK(r0.value == eval_real(f, {0.7}));

    // x = 1, y = 1: e^{-2i}
    const auto r11 = taylor_extend(table, {1.0}, {1.0}, 50);
    const Complex expected = eval(f, {Complex(1.0, 1.0)});
    CHECK(std::abs(r11.value - expected) < 1e-8);
}

TEST_CASE("taylor extension flags a truncated shell sum") {
    const auto f = gaussian1d(2.0);
    DerivativeEvaluator table(f, 80);
    bool threw = false;
    try {
        taylor_extend(table, {2.0}, {2.0}, 20);  // far point, budget 20 is not enough
    } catch (const Error& e) {
        threw = true;
        CHECK(e.kind() == "not-converged");
    }
    CHECK(threw);
    // the full budget converges at the same point
    const auto ok = taylor_extend(table, {2.0}, {2.0}, 80);
    CHECK(std::abs(ok.value - eval(f, {Complex(2.0, 2.0)})) /
              std::abs(eval(f, {Complex(2.0, 2.0)})) <
          1e-8);
    CHECK(ok.tail_estimate == -1.0);  // no seminorm data supplied
}

TEST_CASE("taylor tail majorant from derivative bounds") {
    const auto f = gaussian1d(1.0);
    DerivativeEvaluator table(f, 60);
    // psi_1*(k) for the power family nu=1: -4 below 8, (k/2)ln(k/8)-k/2 above
    auto psi_star = [](int k) {
        return k <= 8 ? -4.0 : 0.5 * k * std::log(k / 8.0) - 0.5 * k;
    };
    const auto r = taylor_extend(table, {0.5}, {1.0}, 40, psi_star, 25.0);
    CHECK(r.tail_estimate >= 0.0);
    CHECK(r.tail_estimate < 1e-3);  // a majorant, not a tight estimate
    // and it really does majorize the true truncation error
    const double truth = std::abs(taylor_extend(table, {0.5}, {1.0}, 60).value - r.value);
    CHECK(truth <= r.tail_estimate + 1e-15);
}

TEST_CASE("value recurrence agrees with the polynomial derivative table") {
    std::mt19937_64 rng(0xC0DE);
    std::uniform_real_distribution<double> ux(-4.0, 4.0);
    for (int trial = 0; trial < 10; ++trial) {
        HermiteGaussian f;
        f.n = trial % 2 == 0 ? 1 : 2;
        f.decay.assign(static_cast<std::size_t>(f.n), 0.5 + 0.5 * (trial % 3));
        MultiIndex zero(static_cast<std::size_t>(f.n), 0);
        f.terms[zero] = Complex(1.0, 0.0);
        MultiIndex lin = zero;
        lin[0] = trial % 3;
        f.terms[lin] += Complex(0.4, -0.2);
        DerivativeTable table(f, 30);
        DerivativeEvaluator deriv(f, 30);
        std::vector<double> x(static_cast<std::size_t>(f.n));
        for (auto& v : x) v = ux(rng);
        const auto st = deriv.prepare(x);
        for_each_up_to(f.n, f.n == 1 ? 30 : 12, [&](const MultiIndex& alpha) {
            const Complex a = table.value(alpha, x);
            const Complex b = deriv.value(st, alpha);
            const double scale = std::fmax(std::abs(a), 1e-280);
            CHECK(std::abs(a - b) / scale < 1e-9);
        });
    }
}

TEST_CASE("conjugation symmetry for real coefficients") {
    HermiteGaussian f = gaussian1d(1.0);
    f.terms[{1}] = 0.5;
    f.terms[{3}] = -0.25;
    REQUIRE(f.real_coefficients());
    std::mt19937_64 rng(0xABCD);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const Complex z(u(rng), u(rng));
        const Complex a = eval(f, {std::conj(z)});
        const Complex b = std::conj(eval(f, {z}));
        CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)));
    }
}

TEST_CASE("sum and scaling stay in the family") {
    const auto f = gaussian1d(1.0);
    HermiteGaussian g = gaussian1d(1.0);
    g.terms.clear();
    g.terms[{2}] = 1.0;
    const auto s = f.plus(g);
    CHECK(s.terms.size() == 2);
    const auto sc = s.scaled(Complex(0.0, 2.0));
    CHECK(std::abs(eval_real(sc, {0.5}) - 2.0 * Complex(0.0, 1.0) * eval_real(s, {0.5})) < 1e-15);
    CHECK_THROWS_AS(f.plus(gaussian1d(2.0)), Error);
}
