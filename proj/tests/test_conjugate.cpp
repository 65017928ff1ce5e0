#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "gskit/conjugate.hpp"

using namespace gskit;

namespace {

GridFunction sample(const std::function<double(double)>& g, double lo, double hi, std::size_t n) {
    GridFunction out;
    out.xs = linear_grid(lo, hi, n);
    out.ys.reserve(n);
    for (double x : out.xs) out.ys.push_back(g(x));
    return out;
}

}  // namespace

TEST_CASE("grid conjugate of y^2/2 is self-conjugate") {
    const auto g = sample([](double y) { return 0.5 * y * y; }, 0.0, 10.0, 2001);
    const auto r = conjugate_grid(g, {3.0});
    CHECK(r.values[0] == Catch::Approx(4.5).margin(1e-4));
    CHECK(g.xs[r.argmax_index[0]] == Catch::Approx(3.0).margin(0.01));
}

TEST_CASE("grid conjugate of e^y picks boundary and stationary maximizers") {
    const auto g = sample([](double y) { return std::exp(y); }, 0.0, 10.0, 4001);
    const auto r = conjugate_grid(g, {0.5, 5.0});
    CHECK(r.values[0] == -1.0);  // sup at y = 0, exactly -e^0
    CHECK(r.argmax_index[0] == 0);
    CHECK(r.values[1] == Catch::Approx(5.0 * std::log(5.0) - 5.0).margin(1e-4));
}

TEST_CASE("fast conjugate equals brute force bit-identically") {
    std::mt19937_64 rng(0x5EED);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const bool convex = trial < 100;
        const std::size_t N = 2 + static_cast<std::size_t>(u01(rng) * 400);
        const std::size_t M = 1 + static_cast<std::size_t>(u01(rng) * 400);
        GridFunction g;
        g.xs.resize(N);
        g.ys.resize(N);
        double x = u01(rng);
        for (std::size_t i = 0; i < N; ++i) {
            g.xs[i] = x;
            x += 1e-3 + u01(rng);
        }
        if (convex) {
            const double a = 0.1 + u01(rng), b = -2.0 + 4.0 * u01(rng), c = -5.0 + 10.0 * u01(rng);
            for (std::size_t i = 0; i < N; ++i)
                g.ys[i] = a * g.xs[i] * g.xs[i] + b * g.xs[i] + c;
        } else {
            for (std::size_t i = 0; i < N; ++i) g.ys[i] = -20.0 + 40.0 * u01(rng);
        }
        std::vector<double> slopes(M);
        double s = -10.0 * u01(rng);
        for (std::size_t i = 0; i < M; ++i) {
            slopes[i] = s;
            s += 1e-3 + u01(rng);
        }
        const auto fast = conjugate_grid(g, slopes);
        const auto brute = conjugate_grid_brute(g, slopes);
        REQUIRE(fast.values == brute.values);
        REQUIRE(fast.argmax_index == brute.argmax_index);
    }
}

TEST_CASE("adaptive conjugate closed-form cases") {
    // self-conjugate parabola
    CHECK(conjugate_adaptive([](double y) { return 0.5 * y * y; }, true, 3.0) ==
          Catch::Approx(4.5).margin(1e-9));
    // (e^{2y})* at 6 = 3 ln 3 - 3
    CHECK(conjugate_adaptive([](double y) { return std::exp(2.0 * y); }, true, 6.0) ==
          Catch::Approx(3.0 * std::log(3.0) - 3.0).margin(1e-9));
    // boundary supremum of (e^y)* below slope 1
    CHECK(conjugate_adaptive([](double y) { return std::exp(y); }, true, 0.5) == -1.0);
    CHECK(conjugate_adaptive([](double y) { return std::exp(y); }, false, 0.5) == -1.0);
    // nonconvex path agrees on smooth problems
    CHECK(conjugate_adaptive([](double y) { return std::exp(2.0 * y); }, false, 6.0) ==
          Catch::Approx(3.0 * std::log(3.0) - 3.0).margin(1e-8));
}

TEST_CASE("adaptive conjugate signals no-decay for linear growth") {
    try {
        conjugate_adaptive([](double y) { return y; }, true, 2.0);
        FAIL("expected no-decay");
    } catch (const Error& e) {
        CHECK(e.kind() == "no-decay");
    }
}

TEST_CASE("biconjugate recovers convex samples and envelopes nonconvex ones") {
    const auto slopes = linear_grid(0.0, 25.0, 2001);
    const auto xs_out = linear_grid(0.1, 8.0, 101);

    const auto g = sample([](double y) { return y * y; }, 0.0, 10.0, 2001);
    const auto back = biconjugate(g, slopes, xs_out);
    for (std::size_t i = 0; i < xs_out.size(); ++i)
        CHECK(back.ys[i] == Catch::Approx(xs_out[i] * xs_out[i]).margin(2e-4));

    // dominance is exact on the sample lattice; between samples the
    // piecewise-linear envelope may sit a chord gap O(h^2) above g
    const auto on_lattice = biconjugate(g, slopes, std::vector<double>(g.xs.begin() + 10,
                                                                       g.xs.begin() + 1800));
    for (std::size_t i = 0; i < on_lattice.xs.size(); ++i) {
        const double gi = on_lattice.xs[i] * on_lattice.xs[i];
        CHECK(on_lattice.ys[i] <= gi + eps_check(gi));
    }

    // nonconvex double well: biconjugate equals the lower convex envelope
    const auto w = [](double y) { return std::min(y * y, (y - 2.0) * (y - 2.0) + 1.0); };
    const auto gw = sample(w, 0.0, 10.0, 4001);
    const auto backw = biconjugate(gw, linear_grid(0.0, 25.0, 4001), xs_out);
    // independent envelope oracle: min over sample chords covering x
    auto envelope_at = [&](double x) {
        double best = kInf;
        for (std::size_t i = 0; i < gw.xs.size(); ++i) {
            if (gw.xs[i] > x) break;
            for (std::size_t j = gw.xs.size(); j-- > 0;) {
                if (gw.xs[j] < x) break;
                const double t = (x - gw.xs[i]) / (gw.xs[j] - gw.xs[i] + 1e-300);
                best = std::fmin(best, gw.ys[i] + t * (gw.ys[j] - gw.ys[i]));
            }
        }
        return best;
    };
    for (double x : {0.5, 1.0, 1.5, 3.0}) {
        const auto it = std::lower_bound(xs_out.begin(), xs_out.end(), x - 1e-12);
        const std::size_t i = static_cast<std::size_t>(it - xs_out.begin());
        CHECK(backw.ys[i] == Catch::Approx(envelope_at(xs_out[i])).margin(5e-3));
    }
    // strictly below g near the well crossover
    const std::size_t i1 = 11;  // xs_out[11] ~ 0.97
    CHECK(backw.ys[i1] < w(xs_out[i1]) - 0.05);

    // zero function with the single slope 0
    const auto gz = sample([](double) { return 0.0; }, 0.0, 10.0, 11);
    const auto backz = biconjugate(gz, {0.0}, xs_out);
    for (double v : backz.ys) CHECK(v == 0.0);
}

TEST_CASE("Fenchel-Young, order reversal and convexity of values") {
    std::mt19937_64 rng(0xFEED);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const auto slopes = linear_grid(0.0, 12.0, 257);

    for (int trial = 0; trial < 25; ++trial) {
        const double a = 0.2 + u01(rng);
        const double c = u01(rng);
        const auto g = sample([&](double y) { return a * y * y + c * y; }, 0.0, 10.0, 301);
        const auto h = sample([&](double y) { return a * y * y + c * y + 0.5 + u01(rng); }, 0.0,
                              10.0, 301);
        const auto rg = conjugate_grid(g, slopes);
        const auto rh = conjugate_grid(h, slopes);
        for (std::size_t s = 0; s < slopes.size(); ++s) {
            // Fenchel-Young on the grid
            for (std::size_t j = 0; j < g.xs.size(); j += 37)
                CHECK(slopes[s] * g.xs[j] <= g.ys[j] + rg.values[s] + eps_check(rg.values[s]));
            // order reversal: g <= h pointwise implies h* <= g*
            CHECK(rh.values[s] <= rg.values[s] + eps_check(rg.values[s]));
        }
        for (std::size_t s = 1; s + 1 < slopes.size(); ++s) {
            const double second =
                rg.values[s + 1] - 2.0 * rg.values[s] + rg.values[s - 1];
            CHECK(second >= -eps_check(rg.values[s]) * 10.0);
        }
    }
}

TEST_CASE("grid validation") {
    GridFunction bad;
    bad.xs = {0.0};
    bad.ys = {1.0};
    CHECK_THROWS_AS(conjugate_grid(bad, {1.0}), Error);
    bad.xs = {1.0, 0.5};
    bad.ys = {0.0, 0.0};
    CHECK_THROWS_AS(conjugate_grid(bad, {1.0}), Error);
    bad.xs = {-1.0, 0.5};
    CHECK_THROWS_AS(conjugate_grid(bad, {1.0}), Error);
}
