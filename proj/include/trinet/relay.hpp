// =========================
// relay.hpp
//
// Pointwise achievable rates for the half-duplex relay strategies
// (decode-forward, compress-forward, feedback, orthogonal DF), their
// Wyner-Ziv compression-noise variances, upper bounds, optimized rates,
// and the closed-form low/high SNR asymptotes.
//
// Conventions: node-1 source, node-2 relay, node-3 destination.
// Power splits are angle-parameterized so the per-state sum constraint
// holds by construction: P1 = P cos^2(angle), P2 = P sin^2(angle).
// Degenerate compression (no feedback power, zero listen fraction)
// yields an infinite sigma^2 sentinel that annihilates its SNR summand.
// =========================
#pragma once

#include <algorithm>
#include <cmath>

#include "trinet/capacity.hpp"
#include "trinet/optimize.hpp"

namespace trinet {

struct RelayParams {
    double t = 0.0;      // relay listen fraction, [0,1]
    double alpha = 1.0;  // non-feedback sub-fraction of t, [0,1]
    double r12 = 0.0;    // source-relay correlation in state m2, [0,1]
    double theta2 = 0.0; // state-m2 split: P1=P cos^2, P2=P sin^2, [0,pi/2]
    double psi3 = 0.0;   // state-m3 split: P1=P cos^2, P3=P sin^2, [0,pi/2]

    void validate() const {
        auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
        auto angle = [](double v) { return v >= 0.0 && v <= 1.5707963267948967; };
        if (!in01(t) || !in01(alpha) || !in01(r12) || !angle(theta2) || !angle(psi3))
            throw std::domain_error("RelayParams: parameter out of range");
    }
};

namespace detail {

// num / (den_a * ((1+y)^e - 1)); returns +inf for degenerate compression
// (y == 0 or e == 0), 0 when the exponent term diverges.
inline double wyner_ziv_sigma(double num, double den_a, double y, double e) {
    if (y <= 0.0) return kInf;
    double w = e * std::log1p(y);
    double k = std::expm1(w);
    if (k <= 0.0) return kInf;
    return num / (den_a * k);
}

} // namespace detail

/// CF compression-noise variance sigma_2^2. t in (0,1]; +inf at t = 1 or when
/// the relay gets no state-m2 power. t = 0 is rejected: CF degenerates there
/// and the caller must use the t = 0 limit of the rate instead.
inline double sigma2_cf(const ChannelGains& g, double P, double t, double theta2) {
    check_power(P);
    if (t <= 0.0 || t > 1.0) throw std::domain_error("sigma2_cf: t must be in (0,1]");
    double c = std::cos(theta2), s = std::sin(theta2);
    double P1 = P * c * c, P2 = P * s * s;
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    return detail::wyner_ziv_sigma((h12sq + h13sq) * P + 1.0, h13sq * P + 1.0,
                                   h23sq * P2 / (h13sq * P1 + 1.0), (1.0 - t) / t);
}

/// Feedback compression-noise variance sigma_3^2; +inf at alpha = 1 or psi3 = 0.
inline double sigma3_fb(const ChannelGains& g, double P, double alpha, double psi3) {
    check_power(P);
    if (alpha < 0.0 || alpha > 1.0) throw std::domain_error("sigma3_fb: alpha must be in [0,1]");
    double c = std::cos(psi3), s = std::sin(psi3);
    double P13 = P * c * c, P33 = P * s * s;
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    double e = alpha >= 1.0 ? 0.0 : (1.0 - alpha) / alpha; // alpha=0 -> +inf exponent
    if (alpha <= 0.0) e = kInf;
    return detail::wyner_ziv_sigma((h12sq + h13sq) * P + 1.0, h12sq * P + 1.0,
                                   h23sq * P33 / (h12sq * P13 + 1.0), e);
}

namespace detail {

struct Branches {
    double b1_at0, b1_at1, b2_at0, b2_at1;
};

// Both DF branches are affine in t once (r12, theta2) are fixed.
inline Branches df_branches(const ChannelGains& g, double P, double r12, double theta2) {
    double c = std::cos(theta2), s = std::sin(theta2);
    double P1 = P * c * c, P2 = P * s * s;
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    double beam = h13sq * P1 + 2.0 * r12 * g.h13 * g.h23 * P * c * s + h23sq * P2;
    return {capacity((1.0 - r12 * r12) * h13sq * P1), capacity(h12sq * P),
            capacity(beam), capacity(h13sq * P)};
}

// FB branches, affine in t: sigma_3^2 does not depend on t.
inline Branches fb_branches(const ChannelGains& g, double P, double alpha, double r12,
                            double theta2, double psi3) {
    Branches df = df_branches(g, P, r12, theta2);
    double c3 = std::cos(psi3);
    double P13 = P * c3 * c3;
    double s3 = sigma3_fb(g, P, alpha, psi3);
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13;
    double listen = alpha * capacity((h13sq / (1.0 + s3) + h12sq) * P) +
                    (1.0 - alpha) * capacity(h12sq * P13);
    return {df.b1_at0, listen, df.b2_at0, alpha * capacity(h13sq * P)};
}

inline double at(const Branches& b, double t) {
    double b1 = b.b1_at0 + t * (b.b1_at1 - b.b1_at0);
    double b2 = b.b2_at0 + t * (b.b2_at1 - b.b2_at0);
    return std::min(b1, b2);
}

} // namespace detail

/// Decode-forward rate at fixed parameters (no sup).
inline double rate_df(const ChannelGains& g, double P, double t, double r12, double theta2) {
    check_power(P);
    RelayParams{t, 1.0, r12, theta2, 0.0}.validate();
    return detail::at(detail::df_branches(g, P, r12, theta2), t);
}

/// Compress-forward rate at fixed parameters. Endpoints use the analytic
/// limits: t = 0 gives C(h13^2 P1) and t = 1 collapses to relay-off.
inline double rate_cf(const ChannelGains& g, double P, double t, double theta2) {
    check_power(P);
    RelayParams{t, 1.0, 0.0, theta2, 0.0}.validate();
    double c = std::cos(theta2);
    double P1 = P * c * c;
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13;
    if (t == 0.0) return capacity(h13sq * P1);
    double s2 = sigma2_cf(g, P, t, theta2);
    return t * capacity((h13sq + h12sq / (1.0 + s2)) * P) + (1.0 - t) * capacity(h13sq * P1);
}

/// Feedback-relay rate at fixed parameters. alpha = 1 reduces exactly to DF.
inline double rate_fb(const ChannelGains& g, double P, double alpha, double t, double r12,
                      double theta2, double psi3) {
    check_power(P);
    RelayParams{t, alpha, r12, theta2, psi3}.validate();
    return detail::at(detail::fb_branches(g, P, alpha, r12, theta2, psi3), t);
}

/// Orthogonal DF rate at fixed t: min{t C(h12^2 P), t C(h13^2 P) + (1-t) C(h23^2 P)}.
inline double rate_odf(const ChannelGains& g, double P, double t) {
    check_power(P);
    if (t < 0.0 || t > 1.0) throw std::domain_error("rate_odf: t must be in [0,1]");
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    return std::min(t * capacity(h12sq * P),
                    t * capacity(h13sq * P) + (1.0 - t) * capacity(h23sq * P));
}

/// Line-segment upper bound on the feedback rate at fixed parameters.
inline double ub_fb(const ChannelGains& g, double P, double alpha, double t, double r12,
                    double theta2, double psi3) {
    check_power(P);
    RelayParams{t, alpha, r12, theta2, psi3}.validate();
    detail::Branches df = detail::df_branches(g, P, r12, theta2);
    double c3 = std::cos(psi3), s3 = std::sin(psi3);
    double P13 = P * c3 * c3, P33 = P * s3 * s3;
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    double listen = alpha * capacity(h12sq * P) + (1.0 - alpha) * capacity(h12sq * P13 + h23sq * P33);
    detail::Branches ub{df.b1_at0, listen, df.b2_at0, alpha * capacity(h13sq * P)};
    return detail::at(ub, t);
}

/// Line-segment upper bound on the compress-forward rate at fixed parameters.
inline double ub_cf(const ChannelGains& g, double P, double t, double theta2) {
    check_power(P);
    RelayParams{t, 1.0, 0.0, theta2, 0.0}.validate();
    double c = std::cos(theta2), s = std::sin(theta2);
    double P1 = P * c * c, P2 = P * s * s;
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    detail::Branches ub{capacity(h13sq * P1 + h23sq * P2), capacity(h13sq * P),
                        capacity(h13sq * P1), capacity((h13sq + h12sq) * P)};
    return detail::at(ub, t);
}

// -------------------------
// Optimized rates
// -------------------------

struct RelayOpt {
    double rate = 0.0;
    RelayParams params;
    std::int64_t evaluations = 0;
    double achieved_tolerance = kInf;
};

namespace detail {

inline void check_reeval(double pointwise, double opt, const char* who) {
    if (!(std::abs(pointwise - opt) <= 1e-9 * std::max(1.0, std::abs(opt))))
        throw std::logic_error(std::string(who) + ": optimizer result fails re-evaluation");
}

} // namespace detail

/// sup over (t, r12, theta2) of the DF rate. t is eliminated analytically:
/// both branches are affine in t, so the best t is a crossing or an endpoint.
inline RelayOpt rate_df_opt(const ChannelGains& g, double P, const GridSpec& spec = {}) {
    check_power(P);
    auto fn = [&](std::span<const double> x) {
        auto b = detail::df_branches(g, P, x[0], x[1]);
        return intersect_t(b.b1_at0, b.b1_at1, b.b2_at0, b.b2_at1).value;
    };
    OptResult r = maximize(fn, {{0.0, 1.0}, {0.0, 1.5707963267948966}}, spec);
    auto b = detail::df_branches(g, P, r.params[0], r.params[1]);
    LineCross lc = intersect_t(b.b1_at0, b.b1_at1, b.b2_at0, b.b2_at1);
    RelayOpt out{r.value, {lc.t, 1.0, r.params[0], r.params[1], 0.0}, r.evaluations,
                 r.achieved_tolerance};
    detail::check_reeval(rate_df(g, P, out.params.t, out.params.r12, out.params.theta2), out.rate,
                         "rate_df_opt");
    return out;
}

/// sup over (t, theta2) of the CF rate. sigma_2^2 depends on t, so t is
/// scanned numerically here.
inline RelayOpt rate_cf_opt(const ChannelGains& g, double P, const GridSpec& spec = {}) {
    check_power(P);
    auto fn = [&](std::span<const double> x) { return rate_cf(g, P, x[0], x[1]); };
    OptResult r = maximize(fn, {{0.0, 1.0}, {0.0, 1.5707963267948966}}, spec);
    RelayOpt out{r.value, {r.params[0], 1.0, 0.0, r.params[1], 0.0}, r.evaluations,
                 r.achieved_tolerance};
    detail::check_reeval(rate_cf(g, P, out.params.t, out.params.theta2), out.rate, "rate_cf_opt");
    return out;
}

/// sup over (t, alpha, r12, theta2, psi3) of the feedback rate; t analytic.
/// The alpha = 1 slice is seeded with the DF optimum at the same spec, so
/// the feedback result never falls below the decode-forward one.
inline RelayOpt rate_fb_opt(const ChannelGains& g, double P, const GridSpec& spec = {}) {
    check_power(P);
    auto fn = [&](std::span<const double> x) {
        auto b = detail::fb_branches(g, P, x[0], x[1], x[2], x[3]);
        return intersect_t(b.b1_at0, b.b1_at1, b.b2_at0, b.b2_at1).value;
    };
    OptResult r = maximize(
        fn, {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.5707963267948966}, {0.0, 1.5707963267948966}}, spec);
    RelayOpt df = rate_df_opt(g, P, spec);
    if (df.rate > r.value) {
        r.value = df.rate;
        r.params = {1.0, df.params.r12, df.params.theta2, 0.0};
    }
    auto b = detail::fb_branches(g, P, r.params[0], r.params[1], r.params[2], r.params[3]);
    LineCross lc = intersect_t(b.b1_at0, b.b1_at1, b.b2_at0, b.b2_at1);
    RelayOpt out{r.value, {lc.t, r.params[0], r.params[1], r.params[2], r.params[3]},
                 r.evaluations, r.achieved_tolerance};
    detail::check_reeval(rate_fb(g, P, out.params.alpha, out.params.t, out.params.r12,
                                 out.params.theta2, out.params.psi3),
                         out.rate, "rate_fb_opt");
    return out;
}

/// max over t of the orthogonal DF rate; both branches affine, solved exactly.
inline RelayOpt rate_odf_opt(const ChannelGains& g, double P) {
    check_power(P);
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    LineCross lc = intersect_t(0.0, capacity(h12sq * P), capacity(h23sq * P), capacity(h13sq * P));
    RelayOpt out{lc.value, {lc.t, 1.0, 0.0, 1.5707963267948966, 0.0}, 3, 0.0};
    detail::check_reeval(rate_odf(g, P, lc.t), out.rate, "rate_odf_opt");
    return out;
}

// -------------------------
// Closed-form asymptotes
// -------------------------

namespace detail {

inline double f1_quad(double theta, double r12, double h13, double h23) {
    double c = std::cos(theta), s = std::sin(theta);
    return h13 * h13 * c * c + 2.0 * r12 * h13 * h23 * c * s + h23 * h23 * s * s;
}

inline double f2_quad(double theta, double r12, double h13) {
    double c = std::cos(theta);
    return (1.0 - r12 * r12) * h13 * h13 * c * c;
}

} // namespace detail

struct SlopeDfClosed {
    double value;
    double lower; // (h13^2+h23^2) h12^2 / (h23^2+h12^2)
    double upper; // ((h13^2+h23^2) h12^2 - h13^4) / (h23^2+h12^2-h13^2)
};

/// Low-SNR DF slope: fine-grid maximization of the (theta, r12) ratio,
/// together with its sandwich bounds. Requires h12^2 >= h13^2. The fully
/// correlated beamforming point (r12 = 1, tan theta = h23/h13), which attains
/// the lower bound exactly, is always probed in addition to the grid.
inline SlopeDfClosed slope_df_closed(const ChannelGains& g, const GridSpec& spec = {65, 4, 0.2}) {
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    if (h12sq < h13sq) throw std::domain_error("slope_df_closed: requires h12^2 >= h13^2");
    auto fn = [&](std::span<const double> x) {
        double f1 = detail::f1_quad(x[0], x[1], g.h13, g.h23);
        double f2 = detail::f2_quad(x[0], x[1], g.h13);
        double den = f1 + h12sq - f2 - h13sq;
        if (den <= 1e-15) return h13sq; // f1=f2 and h12=h13: ratio limit is h13^2
        return (f1 * h12sq - f2 * h13sq) / den;
    };
    OptResult r = maximize(fn, {{0.0, 1.5707963267948966}, {0.0, 1.0}}, spec);
    double beam[2] = {std::atan2(g.h23, g.h13), 1.0};
    double value = std::max(r.value, fn(std::span<const double>(beam)));
    double lower = (h13sq + h23sq) * h12sq / (h23sq + h12sq);
    double upper = h12sq + h23sq > h13sq
                       ? ((h13sq + h23sq) * h12sq - h13sq * h13sq) / (h23sq + h12sq - h13sq)
                       : lower;
    return {value, lower, upper};
}

/// High-SNR DF gain: fine-grid maximization of the printed log-ratio over
/// (theta, r12). Requires h12^2 >= h13^2 and h13 > 0.
inline double gain_df_closed(const ChannelGains& g, const GridSpec& spec = {65, 4, 0.2}) {
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13;
    if (h12sq < h13sq) throw std::domain_error("gain_df_closed: requires h12^2 >= h13^2");
    if (h13sq <= 0.0) throw std::domain_error("gain_df_closed: requires h13 > 0");
    double lh12 = std::log2(h12sq), lh13 = std::log2(h13sq);
    auto fn = [&](std::span<const double> x) {
        double f1 = detail::f1_quad(x[0], x[1], g.h13, g.h23);
        double f2 = detail::f2_quad(x[0], x[1], g.h13);
        if (f2 <= 0.0 || f1 < h13sq) return lh13; // degenerate corners reduce to relay-off
        double lf1 = std::log2(f1), lf2 = std::log2(f2);
        double den = lf1 + lh12 - lf2 - lh13;
        if (std::abs(den) <= 1e-12) return lh13;
        return (lf1 * lh12 - lf2 * lh13) / den;
    };
    return maximize(fn, {{0.0, 1.5707963267948966}, {0.0, 1.0}}, spec).value;
}

/// High-SNR CF gain: maximization of the printed expression over (t, theta),
/// with sigma_2^2(inf) handled through its degenerate limits. Requires h13 > 0.
inline double gain_cf_closed(const ChannelGains& g, const GridSpec& spec = {65, 4, 0.2}) {
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    if (h13sq <= 0.0) throw std::domain_error("gain_cf_closed: requires h13 > 0");
    auto fn = [&](std::span<const double> x) {
        double t = x[0], theta = x[1];
        double c = std::cos(theta), ta = std::tan(theta);
        double e = t >= 1.0 ? 0.0 : (t <= 0.0 ? kInf : (1.0 - t) / t);
        double s2 = detail::wyner_ziv_sigma(h12sq + h13sq, h13sq, h23sq * ta * ta / h13sq, e);
        double first = std::log2(h13sq + h12sq / (1.0 + s2));
        double second = h13sq * c * c;
        if (t >= 1.0) return first;
        if (second <= 0.0) return -kInf;
        return t * first + (1.0 - t) * std::log2(second);
    };
    return maximize(fn, {{0.0, 1.0}, {0.0, 1.5707963267948966}}, spec).value;
}

} // namespace trinet
