#include <catch2/catch_amalgamated.hpp>

#include "trinet/capacity.hpp"
#include "trinet/optimize.hpp"
#include "trinet/source_model.hpp"

using namespace trinet;

TEST_CASE("maximize finds the peak of a 1-D concave rate") {
    // x -> C(x(2-x)) on [0,2] peaks at x=1 with value C(1) = 0.5
    auto fn = [](std::span<const double> x) { return capacity(x[0] * (2.0 - x[0])); };
    OptResult r = maximize(fn, {{0.0, 2.0}});
    CHECK(r.value == Catch::Approx(0.5).margin(1e-10));
    CHECK(r.params[0] == Catch::Approx(1.0).margin(1e-5));
}

TEST_CASE("maximize is deterministic and lowest-index on ties") {
    auto flat = [](std::span<const double>) { return 1.0; };
    OptResult a = maximize(flat, {{0.0, 1.0}, {0.0, 1.0}});
    CHECK(a.params[0] == 0.0);
    CHECK(a.params[1] == 0.0);

    auto fn = [](std::span<const double> x) { return -(x[0] - 0.37) * (x[0] - 0.37); };
    OptResult r1 = maximize(fn, {{0.0, 1.0}});
    OptResult r2 = maximize(fn, {{0.0, 1.0}});
    CHECK(r1.value == r2.value);
    CHECK(r1.params == r2.params);
    CHECK(r1.evaluations == r2.evaluations);
}

TEST_CASE("maximize monotone under box enlargement") {
    auto fn = [](std::span<const double> x) {
        return capacity(x[0] * (2.0 - x[0])) + 0.25 * capacity(4.0 * x[1] * (1.0 - x[1]));
    };
    OptResult small = maximize(fn, {{0.2, 0.8}, {0.0, 0.5}});
    OptResult big = maximize(fn, {{0.0, 2.0}, {0.0, 1.0}});
    CHECK(big.value >= small.value - 1e-9);
}

TEST_CASE("maximize validates inputs") {
    auto fn = [](std::span<const double>) { return 0.0; };
    CHECK_THROWS_AS(maximize(fn, {}), std::invalid_argument);
    CHECK_THROWS_AS(maximize(fn, {{1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(maximize(fn, {{0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(maximize(fn, {{0.0, 1.0}}, GridSpec{2, 3, 0.2}), std::invalid_argument);
}

TEST_CASE("intersect_t matches the hand-solved crossing") {
    // branches t*C(4) and t*C(1) + (1-t)*C(4): frozen from the line algebra
    double a = capacity(4.0), b = capacity(1.0);
    LineCross lc = intersect_t(0.0, a, a, b);
    CHECK(lc.t == Catch::Approx(0.6372172703750176).margin(1e-12));
    CHECK(lc.value == Catch::Approx(0.739786341315595).margin(1e-12));
}

TEST_CASE("intersect_t endpoint cases") {
    // identical increasing branches: max at t=1
    LineCross same = intersect_t(0.1, 0.9, 0.1, 0.9);
    CHECK(same.t == 1.0);
    CHECK(same.value == Catch::Approx(0.9));
    // branch1 always below branch2, increasing: t* = 1
    LineCross below = intersect_t(0.0, 0.5, 0.6, 0.8);
    CHECK(below.t == 1.0);
    CHECK(below.value == Catch::Approx(0.5));
    // decreasing min: stay at t=0
    LineCross dec = intersect_t(0.5, 0.1, 0.9, 0.8);
    CHECK(dec.t == 0.0);
    CHECK(dec.value == Catch::Approx(0.5));
}

TEST_CASE("intersect_t never beaten by a dense t scan") {
    SplitMix64 rng(33);
    for (int i = 0; i < 500; ++i) {
        double b10 = rng.next_unit(), b11 = rng.next_unit();
        double b20 = rng.next_unit(), b21 = rng.next_unit();
        LineCross lc = intersect_t(b10, b11, b20, b21);
        for (int k = 0; k <= 200; ++k) {
            double t = k / 200.0;
            double v = std::min(b10 + t * (b11 - b10), b20 + t * (b21 - b20));
            CHECK(lc.value >= v - 1e-12);
        }
    }
}

TEST_CASE("slope and gain probes recover the relay-off asymptotes") {
    ChannelGains g{0.3, 1.7, 0.9};
    auto ro = [&](double P) { return relay_off_rate(g, P); };
    SlopeEstimate s = slope_estimate(ro);
    CHECK(s.value == Catch::Approx(1.7 * 1.7).epsilon(2e-4));
    CHECK(s.richardson == Catch::Approx(1.7 * 1.7).epsilon(1e-6));

    GainEstimate ge = gain_estimate(ro);
    CHECK(ge.value == Catch::Approx(std::log2(1.7 * 1.7)).margin(1e-5));
    CHECK(std::abs(ge.check - ge.value) < 1e-5);
}
