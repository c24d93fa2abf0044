// =========================
// sideinfo.hpp
//
// Multicast with receiver side information: bandwidth-expansion factors for
// the separate, nested-binning/degraded-set, and cooperative source-channel
// schemes, plus the minimum-energy closed forms of the low-power limit.
//
// Node-1 is the source; H12 = H(S1|S2) and H13 = H(S1|S3) are the residual
// entropies at receivers 2 and 3. Modules relabel receivers internally:
// the degraded scheme orients by residual entropy (nested binning), the
// cooperative scheme by expected bandwidth expansion tau_ex = H/C.
// =========================
#pragma once

#include <algorithm>
#include <cmath>

#include "trinet/capacity.hpp"
#include "trinet/optimize.hpp"
#include "trinet/relay.hpp"

namespace trinet {

struct SideInfoInstance {
    ChannelGains g;
    double P = 1.0;
    double H12 = 0.0; // H(S1|S2), bits
    double H13 = 0.0; // H(S1|S3), bits

    void validate() const {
        g.validate();
        check_power(P);
        if (!(H12 >= 0.0) || !(H13 >= 0.0))
            throw std::domain_error("SideInfoInstance: entropies must be nonnegative");
    }
};

struct TauResult {
    double tau = 0.0;
    double tau1 = 0.0;   // decode-first phase
    double tau0 = 0.0;   // assist phase
    double alpha = 1.0;  // chosen feedback fraction, when applicable
    double gamma = 0.0;  // degraded-set power split, when applicable
    bool feasible = true;

    static TauResult infeasible_result() { return {kInf, kInf, kInf, 1.0, 0.0, false}; }
};

namespace detail {

// H / C with the convention 0/anything = 0; +inf when C = 0 and H > 0.
inline double tau_term(double H, double C) {
    if (H <= 0.0) return 0.0;
    return C > 0.0 ? H / C : kInf;
}

} // namespace detail

/// Worst-case binning over the weakest link:
/// max(H12,H13) / C(min(h12^2,h13^2) P).
inline TauResult tau_separate(const SideInfoInstance& inst) {
    inst.validate();
    double cap = capacity(std::min(inst.g.h12 * inst.g.h12, inst.g.h13 * inst.g.h13) * inst.P);
    double t = detail::tau_term(std::max(inst.H12, inst.H13), cap);
    if (std::isinf(t)) return TauResult::infeasible_result();
    return {t, t, 0.0, 1.0, 0.0, true};
}

/// Nested binning + broadcasting with a degraded information set.
/// Oriented so the less-correlated receiver (larger residual) plays the
/// node-2 role. The gamma split of case 2 is solved by bisection on the
/// crossing of the private and common constraints.
inline TauResult tau_degraded(const SideInfoInstance& inst) {
    inst.validate();
    double Hw = inst.H12, gw = inst.g.h12; // "w": less correlated (bigger residual)
    double Hs = inst.H13, gs = inst.g.h13;
    if (Hw < Hs) {
        std::swap(Hw, Hs);
        std::swap(gw, gs);
    }
    double P = inst.P;
    if (Hw <= 0.0) return {0.0, 0.0, 0.0, 1.0, 0.0, true};

    if (gw * gw <= gs * gs) {
        // receiver with the larger residual also has the weaker channel:
        // send everything at its rate, the other receiver decodes for free
        double t = detail::tau_term(Hw, capacity(gw * gw * P));
        if (std::isinf(t)) return TauResult::infeasible_result();
        return {t, t, 0.0, 1.0, 1.0, true};
    }

    // private part Hw-Hs at C(gamma gw^2 P); common part Hs at the
    // interference-limited C((1-gamma) gs^2 P / (1 + gamma gs^2 P))
    auto private_tau = [&](double gamma) {
        return detail::tau_term(Hw - Hs, capacity(gamma * gw * gw * P));
    };
    auto common_tau = [&](double gamma) {
        double snr = (1.0 - gamma) * gs * gs * P / (1.0 + gamma * gs * gs * P);
        return detail::tau_term(Hs, capacity(snr));
    };
    if (Hw == Hs) {
        double t = common_tau(0.0);
        if (std::isinf(t)) return TauResult::infeasible_result();
        return {t, t, 0.0, 1.0, 0.0, true};
    }
    if (Hs <= 0.0) {
        double t = private_tau(1.0);
        if (std::isinf(t)) return TauResult::infeasible_result();
        return {t, t, 0.0, 1.0, 1.0, true};
    }
    if (gw <= 0.0 || gs <= 0.0 || P <= 0.0) return TauResult::infeasible_result();
    // private_tau decreases, common_tau increases: bisect the crossing
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 64; ++it) {
        double mid = 0.5 * (lo + hi);
        (private_tau(mid) > common_tau(mid) ? lo : hi) = mid;
    }
    double gamma = 0.5 * (lo + hi);
    double t = std::max(private_tau(gamma), common_tau(gamma));
    return {t, t, 0.0, 1.0, gamma, true};
}

namespace detail {

struct Oriented {
    double Hs, gs; // strong receiver: smaller tau_ex
    double Hw, gw;
    bool swapped;  // true when receiver 3 is the strong one
};

inline Oriented orient_by_tau_ex(const SideInfoInstance& inst) {
    double c2 = capacity(inst.g.h12 * inst.g.h12 * inst.P);
    double c3 = capacity(inst.g.h13 * inst.g.h13 * inst.P);
    double tex2 = tau_term(inst.H12, c2);
    double tex3 = tau_term(inst.H13, c3);
    if (tex2 <= tex3) return {inst.H12, inst.g.h12, inst.H13, inst.g.h13, false};
    return {inst.H13, inst.g.h13, inst.H12, inst.g.h12, true};
}

} // namespace detail

/// Cooperative source-channel scheme without feedback: the strong receiver
/// decodes first, then source and strong receiver beamform the remainder to
/// the weak one, whose list decoding credit is min(Cw,Cs) H_s / C_s.
inline TauResult tau_coop(const SideInfoInstance& inst) {
    inst.validate();
    auto o = detail::orient_by_tau_ex(inst);
    double P = inst.P;
    double Cs = capacity(o.gs * o.gs * P);
    double Cw = capacity(o.gw * o.gw * P);
    double tau1 = detail::tau_term(o.Hs, Cs);
    if (std::isinf(tau1)) return TauResult::infeasible_result();
    double credit = o.Hs > 0.0 ? std::min(Cw, Cs) * o.Hs / Cs : 0.0;
    double numer = std::max(0.0, o.Hw - credit);
    double tau0 = detail::tau_term(numer, capacity((o.gw * o.gw + inst.g.h23 * inst.g.h23) * P));
    if (std::isinf(tau0)) return TauResult::infeasible_result();
    return {tau1 + tau0, tau1, tau0, 1.0, 0.0, true};
}

struct CoopFbScan {
    int alpha_res = 25;      // alpha grid points on [alpha_min, 1]
    int alpha_rounds = 2;    // shrinking refinement rounds for alpha
    double alpha_shrink = 0.2;
    double alpha_min = 0.02;
    GridSpec theta{17, 2, 0.2}; // power-split search inside R_CF2
};

/// Cooperative scheme with weak-receiver feedback at a fixed alpha.
/// R_CF2(alpha) is the compress-forward rate of the sub-channel where the weak
/// receiver relays for the strong one (source->node-1, relay->weak,
/// destination->strong), with the relay listening an alpha fraction.
inline TauResult tau_coop_fb(const SideInfoInstance& inst, double alpha,
                             const CoopFbScan& scan = {}) {
    inst.validate();
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("tau_coop_fb: alpha must be in (0,1]");
    auto o = detail::orient_by_tau_ex(inst);
    double P = inst.P;
    ChannelGains cf_g{o.gw, o.gs, inst.g.h23}; // source-relay, source-dest, relay-dest

    auto fn = [&](std::span<const double> x) { return rate_cf(cf_g, P, alpha, x[0]); };
    OptResult r = maximize(fn, {{0.0, 1.5707963267948966}}, scan.theta);
    double rcf2 = r.value;
    double tau1 = detail::tau_term(o.Hs, rcf2);
    if (std::isinf(tau1)) return TauResult::infeasible_result();

    double credit = 0.0;
    if (o.Hs > 0.0 && rcf2 > 0.0) {
        double sigma = sigma2_cf(cf_g, P, alpha, r.params[0]);
        double i1 = capacity(o.gw * o.gw * P);
        double i2 = capacity((o.gs * o.gs + o.gw * o.gw / (1.0 + sigma)) * P);
        credit = alpha * std::min(i1, i2) * o.Hs / rcf2;
    }
    double numer = std::max(0.0, o.Hw - credit);
    double tau0 = detail::tau_term(numer, capacity((o.gw * o.gw + inst.g.h23 * inst.g.h23) * P));
    if (std::isinf(tau0)) return TauResult::infeasible_result();
    return {tau1 + tau0, tau1, tau0, alpha, 0.0, true};
}

/// Scan of tau_coop_fb over alpha, descending from 1 so ties keep the
/// no-feedback solution, with shrinking local refinement.
inline TauResult tau_coop_fb_opt(const SideInfoInstance& inst, const CoopFbScan& scan = {}) {
    inst.validate();
    double lo = scan.alpha_min, hi = 1.0;
    TauResult best = TauResult::infeasible_result();
    best.tau = kInf;
    double best_alpha = 1.0;
    auto sweep = [&](double a_lo, double a_hi) {
        int n = std::max(2, scan.alpha_res);
        for (int i = 0; i < n; ++i) {
            double a = a_hi - (a_hi - a_lo) * i / double(n - 1); // descending
            TauResult t = tau_coop_fb(inst, a, scan);
            double v = t.feasible ? t.tau : kInf;
            if (v < best.tau) {
                best = t;
                best_alpha = a;
            }
        }
    };
    sweep(lo, hi);
    double width = (hi - lo);
    for (int rd = 0; rd < scan.alpha_rounds; ++rd) {
        width *= scan.alpha_shrink;
        sweep(std::max(lo, best_alpha - 0.5 * width), std::min(hi, best_alpha + 0.5 * width));
    }
    if (!best.feasible && std::isinf(best.tau)) return TauResult::infeasible_result();
    return best;
}

// -------------------------
// Minimum energy per source observation (P -> 0 closed forms)
// -------------------------

namespace detail {

inline double e_term(double H, double h_sq) {
    if (H <= 0.0) return 0.0;
    return h_sq > 0.0 ? H / h_sq : kInf;
}

inline void check_energy_orientation(double H12, double H13, const ChannelGains& g) {
    double t2 = e_term(H12, g.h12 * g.h12);
    double t3 = e_term(H13, g.h13 * g.h13);
    if (t2 > t3)
        throw std::domain_error(
            "min energy: orientation requires H12/h12^2 <= H13/h13^2 (relabel receivers)");
}

} // namespace detail

/// Degraded-set benchmark limit E_1,m (log e read in base 2).
inline double min_energy_degraded(double H12, double H13, const ChannelGains& g) {
    detail::check_energy_orientation(H12, H13, g);
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13;
    double e;
    if (H12 >= H13) {
        double diff = h13sq > 0.0 ? std::max(1.0 / h13sq - (h12sq > 0.0 ? 1.0 / h12sq : kInf), 0.0) : kInf;
        e = detail::e_term(H12, h12sq) + (H13 > 0.0 ? diff * H13 : 0.0);
    } else {
        double diff = h12sq > 0.0 ? std::max(1.0 / h12sq - (h13sq > 0.0 ? 1.0 / h13sq : kInf), 0.0) : kInf;
        e = detail::e_term(H13, h13sq) + (H12 > 0.0 ? diff * H12 : 0.0);
    }
    return 2.0 / kLog2E * e;
}

/// Cooperative scheme limit E_2,m.
inline double min_energy_coop(double H12, double H13, const ChannelGains& g) {
    detail::check_energy_orientation(H12, H13, g);
    double h12sq = g.h12 * g.h12, h13sq = g.h13 * g.h13, h23sq = g.h23 * g.h23;
    if (H12 <= 0.0 && H13 <= 0.0) return 0.0;
    if (h12sq <= 0.0) return kInf;
    double assist = (h12sq * H13 - std::min(h13sq, h12sq) * H12) / ((h13sq + h23sq) * h12sq);
    return 2.0 / kLog2E * (H12 / h12sq + std::max(assist, 0.0));
}

/// E(P) = tau(P) * P; +inf when the scheme is infeasible at P.
template <typename TauFn>
double energy_at(double P, TauFn&& tau_fn) {
    check_power(P);
    TauResult t = tau_fn(P);
    return t.feasible ? t.tau * P : kInf;
}

} // namespace trinet
