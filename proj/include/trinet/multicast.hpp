// =========================
// multicast.hpp
//
// Achievable rates for the two-receiver multicast channel: non-cooperative
// baseline, DF receiver cooperation, and the greedy (CF-assisted) scheme.
// Node-1 is the source; receivers are relabeled internally so the stronger
// source link plays the h12 role, honoring the WLOG orientation. Reports
// carry a `swapped` flag so callers can undo the relabeling.
// =========================
#pragma once

#include <algorithm>
#include <cmath>

#include "trinet/capacity.hpp"
#include "trinet/optimize.hpp"
#include "trinet/relay.hpp"

namespace trinet {

namespace detail {

inline ChannelGains oriented_mc(const ChannelGains& g, bool& swapped) {
    swapped = g.h12 < g.h13;
    return swapped ? ChannelGains{g.h13, g.h12, g.h23} : g;
}

} // namespace detail

/// Both receivers listen the whole time: C(min(h12^2, h13^2) P).
inline double rate_noncoop_mc(const ChannelGains& g, double P) {
    check_power(P);
    double m = std::min(g.h12 * g.h12, g.h13 * g.h13);
    return capacity(m * P);
}

/// Compression-noise variance sigma_4^2 of the greedy multicast scheme.
/// +inf at alpha = 1 or psi3 = 0. Gains oriented internally.
inline double sigma4_mc(const ChannelGains& g_in, double P, double alpha, double psi3) {
    check_power(P);
    if (alpha < 0.0 || alpha > 1.0) throw std::domain_error("sigma4_mc: alpha must be in [0,1]");
    bool swapped;
    ChannelGains g = detail::oriented_mc(g_in, swapped);
    double c = std::cos(psi3), s = std::sin(psi3);
    double P13 = P * c * c, P33 = P * s * s;
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    double e = alpha >= 1.0 ? 0.0 : (alpha <= 0.0 ? kInf : (1.0 - alpha) / alpha);
    return detail::wyner_ziv_sigma((h12sq + h13sq) * P + 1.0, h12sq * P + 1.0,
                                   h23sq * P33 / (h12sq * P13 + 1.0), e);
}

namespace detail {

// Greedy multicast branches, affine in t for fixed (alpha, psi3).
inline Branches greedy_mc_branches(const ChannelGains& g, double P, double alpha, double psi3) {
    double c = std::cos(psi3);
    double P13 = P * c * c;
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    double s4 = sigma4_mc(g, P, alpha, psi3);
    double listen = alpha * capacity((h13sq / (1.0 + s4) + h12sq) * P) +
                    (1.0 - alpha) * capacity(h12sq * P13);
    return {0.0, listen, capacity((h13sq + h23sq) * P), alpha * capacity(h13sq * P)};
}

} // namespace detail

/// Greedy multicast rate at fixed parameters; alpha = 1 equals rate_df_mc.
inline double rate_greedy_mc(const ChannelGains& g_in, double P, double alpha, double t,
                             double psi3) {
    check_power(P);
    RelayParams{t, alpha, 0.0, 0.0, psi3}.validate();
    bool swapped;
    ChannelGains g = detail::oriented_mc(g_in, swapped);
    return detail::at(detail::greedy_mc_branches(g, P, alpha, psi3), t);
}

/// DF multicast rate at fixed t (the alpha = 1 special case).
inline double rate_df_mc(const ChannelGains& g_in, double P, double t) {
    check_power(P);
    if (t < 0.0 || t > 1.0) throw std::domain_error("rate_df_mc: t must be in [0,1]");
    bool swapped;
    ChannelGains g = detail::oriented_mc(g_in, swapped);
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    return std::min(t * capacity(h12sq * P),
                    t * capacity(h13sq * P) + (1.0 - t) * capacity((h13sq + h23sq) * P));
}

struct DfMcOptimal {
    double t_star;
    double rate;
};

/// Closed-form optimum of the DF multicast rate (line crossing):
/// t* = C((h13^2+h23^2)P) / (C((h13^2+h23^2)P) + C(h12^2 P) - C(h13^2 P)).
inline DfMcOptimal df_mc_optimal(const ChannelGains& g_in, double P) {
    check_power(P);
    bool swapped;
    ChannelGains g = detail::oriented_mc(g_in, swapped);
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    double a = capacity(h12sq * P), b = capacity(h13sq * P), bf = capacity((h13sq + h23sq) * P);
    if (a <= 0.0) return {1.0, 0.0}; // dead source links
    double den = bf + a - b;
    double t = den > 0.0 ? std::min(1.0, bf / den) : 1.0;
    return {t, t * a};
}

struct MulticastOpt {
    double rate = 0.0;
    double t = 0.0;
    double alpha = 1.0;
    double psi3 = 0.0;
    bool swapped = false; // receiver roles relabeled to enforce h12 >= h13
    std::int64_t evaluations = 0;
    double achieved_tolerance = kInf;
};

/// sup over (t, alpha, psi3) of the greedy multicast rate; t analytic.
inline MulticastOpt rate_greedy_mc_opt(const ChannelGains& g_in, double P,
                                       const GridSpec& spec = {}) {
    check_power(P);
    bool swapped;
    ChannelGains g = detail::oriented_mc(g_in, swapped);
    auto fn = [&](std::span<const double> x) {
        auto b = detail::greedy_mc_branches(g, P, x[0], x[1]);
        return intersect_t(b.b1_at0, b.b1_at1, b.b2_at0, b.b2_at1).value;
    };
    OptResult r = maximize(fn, {{0.0, 1.0}, {0.0, 1.5707963267948966}}, spec);
    auto b = detail::greedy_mc_branches(g, P, r.params[0], r.params[1]);
    LineCross lc = intersect_t(b.b1_at0, b.b1_at1, b.b2_at0, b.b2_at1);
    MulticastOpt out{r.value, lc.t, r.params[0], r.params[1], swapped, r.evaluations,
                     r.achieved_tolerance};
    detail::check_reeval(rate_greedy_mc(g, P, out.alpha, out.t, out.psi3), out.rate,
                         "rate_greedy_mc_opt");
    return out;
}

/// Low-SNR slope of the greedy multicast scheme,
/// h12^2 (h23^2 + h13^2) / (h12^2 + h23^2), oriented so h12^2 >= h13^2.
inline double slope_greedy_mc(const ChannelGains& g_in) {
    bool swapped;
    ChannelGains g = detail::oriented_mc(g_in, swapped);
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    double den = h12sq + h23sq;
    if (den <= 0.0) return 0.0; // both cooperative links dead
    return h12sq * (h23sq + h13sq) / den;
}

} // namespace trinet
