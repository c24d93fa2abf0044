#include <catch2/catch_amalgamated.hpp>

#include "trinet/multicast.hpp"
#include "trinet/source_model.hpp"

using namespace trinet;

namespace {
constexpr double kPi2 = 1.5707963267948966;
}

TEST_CASE("non-cooperative multicast rate") {
    CHECK(rate_noncoop_mc({1, 1, 7}, 3.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(rate_noncoop_mc({2, 1, 5}, 3.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(rate_noncoop_mc({1.1, 1, 14.125}, 1.0) == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("sigma_4^2 values and limits") {
    CHECK(sigma4_mc({1.1, 1, 14.125}, 1.0, 1.0, 0.7) == kInf);
    CHECK(sigma4_mc({1.1, 1, 14.125}, 1.0, 0.7, 0.0) == kInf);
    CHECK(sigma4_mc({1.1, 1, 14.125}, 1.0, 0.7, kPi2 / 2) ==
          Catch::Approx(0.2958110089110302).margin(1e-12));
}

TEST_CASE("greedy multicast pointwise") {
    CHECK(rate_greedy_mc({1.1, 1, 14.125}, 1.0, 0.8, 0.7, kPi2 / 2) ==
          Catch::Approx(0.45876753866293174).margin(1e-12));

    SplitMix64 rng(201);
    for (int i = 0; i < 2000; ++i) {
        ChannelGains g{5 * rng.next_unit(), 5 * rng.next_unit(), 5 * rng.next_unit()};
        double P = 10 * rng.next_unit();
        double t = rng.next_unit();
        // alpha = 1 collapses to DF multicast exactly
        CHECK(std::abs(rate_greedy_mc(g, P, 1.0, t, kPi2 * rng.next_unit()) -
                       rate_df_mc(g, P, t)) <= 1e-12);
    }
    // t = 1, alpha = 1 is the non-cooperative rate
    ChannelGains g{2, 1, 5};
    CHECK(rate_greedy_mc(g, 3.0, 1.0, 1.0, 0.3) ==
          Catch::Approx(rate_noncoop_mc(g, 3.0)).margin(1e-12));
}

TEST_CASE("DF multicast closed-form optimum") {
    // h12^2=4, h13^2=1, h23^2=3, P=1: frozen from the crossing algebra
    ChannelGains g{2, 1, 1.7320508075688772};
    DfMcOptimal best = df_mc_optimal(g, 1.0);
    CHECK(best.t_star == Catch::Approx(0.6372172703750176).margin(1e-12));
    CHECK(best.rate == Catch::Approx(0.739786341315595).margin(1e-12));
    // dominates a dense scan of the pointwise rate, within the scan's own
    // kink resolution
    double scan = 0.0;
    for (int k = 0; k <= 20000; ++k) scan = std::max(scan, rate_df_mc(g, 1.0, k / 20000.0));
    CHECK(best.rate >= scan - 1e-12);
    CHECK(best.rate - scan <= 1e-4);
    // dead inter-receiver link: no gap over non-cooperation
    ChannelGains dead{2, 1, 0};
    CHECK(df_mc_optimal(dead, 1.0).rate ==
          Catch::Approx(rate_noncoop_mc(dead, 1.0)).margin(1e-12));
}

TEST_CASE("DF multicast gap formula") {
    SplitMix64 rng(202);
    for (int i = 0; i < 300; ++i) {
        double h13 = 0.2 + 2 * rng.next_unit();
        double h12 = h13 * (1.01 + rng.next_unit());
        double h23 = 0.1 + 3 * rng.next_unit();
        double P = std::pow(10.0, -1 + 2 * rng.next_unit());
        ChannelGains g{h12, h13, h23};
        DfMcOptimal best = df_mc_optimal(g, P);
        double gap = (1.0 - best.t_star) *
                     (capacity((h13 * h13 + h23 * h23) * P) - capacity(h13 * h13 * P));
        CHECK(best.rate - rate_noncoop_mc(g, P) == Catch::Approx(gap).margin(1e-10));
        CHECK(gap > 0.0);
    }
}

TEST_CASE("ordering of the three multicast schemes") {
    SplitMix64 rng(203);
    GridSpec quick{17, 3, 0.2};
    for (int i = 0; i < 60; ++i) {
        ChannelGains g{5 * rng.next_unit(), 5 * rng.next_unit(), 5 * rng.next_unit()};
        double P = std::pow(10.0, -1 + 2 * rng.next_unit());
        double nc = rate_noncoop_mc(g, P);
        double df = df_mc_optimal(g, P).rate;
        double gr = rate_greedy_mc_opt(g, P, quick).rate;
        auto b = cut_set_bounds(g, P);
        CHECK(df >= nc - 1e-12);
        CHECK(gr >= df - 1e-9);
        CHECK(gr <= std::min(b.beamforming, b.multireceiver) + 1e-9);
    }
}

TEST_CASE("equal source links: DF gains nothing, greedy still does") {
    ChannelGains g{1, 1, 14.125};
    double P = 1.0;
    CHECK(df_mc_optimal(g, P).rate == Catch::Approx(rate_noncoop_mc(g, P)).margin(1e-12));
    double gr = rate_greedy_mc_opt(g, P, GridSpec{33, 3, 0.2}).rate;
    CHECK(gr > rate_noncoop_mc(g, P) + 0.02);
}

TEST_CASE("greedy multicast slope") {
    CHECK(slope_greedy_mc({2, 1, 2}) == Catch::Approx(2.5).margin(1e-12));
    // dead inter-receiver link reduces to the non-cooperative slope
    CHECK(slope_greedy_mc({2, 1, 0}) == Catch::Approx(1.0).margin(1e-12));
    // formula limit as h23 grows is the stronger squared source gain
    CHECK(slope_greedy_mc({2, 1, 1000}) == Catch::Approx(4.0).epsilon(1e-3));
    CHECK(slope_greedy_mc({0, 0, 0}) == 0.0);
    // orientation: swapping the receivers leaves the slope unchanged
    CHECK(slope_greedy_mc({1, 2, 3}) == slope_greedy_mc({2, 1, 3}));
}

TEST_CASE("large-gain multicast limits approach the bounds from below") {
    GridSpec spec{17, 3, 0.2};
    double prev = 0.0;
    for (double h12 : {10.0, 100.0, 1000.0}) {
        ChannelGains g{h12, 1, 1};
        double ratio = rate_greedy_mc_opt(g, 1.0, spec).rate / cut_set_bounds(g, 1.0).beamforming;
        CHECK(ratio > prev);
        prev = ratio;
    }
    CHECK(prev > 0.95);
    prev = 0.0;
    for (double h23 : {10.0, 100.0, 1000.0}) {
        ChannelGains g{1, 1, h23};
        double ratio = rate_greedy_mc_opt(g, 1.0, spec).rate / cut_set_bounds(g, 1.0).multireceiver;
        CHECK(ratio > prev);
        prev = ratio;
    }
    CHECK(prev > 0.8);
}
