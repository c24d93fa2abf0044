// =========================
// conference.hpp
//
// Three-stage conference multicast: genie-aided bound, per-stage bandwidth
// expansion with evolving side information, optimal and greedy schedulers,
// and minimum energy over the power grid.
//
// Knowledge model: after node i multicasts, every node holds S_i exactly;
// a receiver's residual entropy is conditioned on its full holdings. A stage
// is therefore keyed by (multicaster, set of previous multicasters), giving
// 12 distinct stages per power point, cached by StageCache.
// =========================
#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "trinet/capacity.hpp"
#include "trinet/multicast.hpp"
#include "trinet/sideinfo.hpp"
#include "trinet/source_model.hpp"

namespace trinet {

enum class Scheme { coop, degraded };

struct ConferenceScan {
    CoopFbScan fb{};            // per-stage alpha/theta search
    GridSpec mc{17, 2, 0.2};    // greedy-multicast search for equal residuals
};

/// Coarser search used for Monte Carlo volume; accuracy against the default
/// scan is checked in the test suite.
inline ConferenceScan fast_conference_scan() {
    ConferenceScan s;
    s.fb.alpha_res = 9;
    s.fb.alpha_rounds = 0;
    s.fb.theta = GridSpec{7, 1, 0.25};
    s.mc = GridSpec{7, 1, 0.3};
    return s;
}

/// Genie-aided lower bound: max_i (H(Si|Sj,Sk) + H(Sj,Sk|Si)) / C((h_ij^2+h_ik^2)P).
inline double genie_tau(const EntropyBundle& b, const ChannelGains& g, double P) {
    check_power(P);
    double worst = 0.0;
    for (int i = 1; i <= 3; ++i) {
        int j = i == 1 ? 2 : 1, k = i == 3 ? 2 : 3;
        double need = b.cond(i, var_set({j, k})) + b.pair_given(i);
        double gij = g.gain(i, j), gik = g.gain(i, k);
        double cap = capacity((gij * gij + gik * gik) * P);
        double tau = detail::tau_term(need, cap);
        if (tau > worst) worst = tau;
    }
    return worst; // +inf marks an infeasible instance
}

struct StageReport {
    int multicaster = 0;
    std::array<int, 2> receivers{};
    std::array<double, 2> residuals{};
    Scheme scheme = Scheme::coop;
    double tau = 0.0;
    double alpha = 1.0;
    bool feasible = true;
};

using Knowledge = std::array<VarSet, 3>; // holdings per node, bit i-1 = S_i

inline Knowledge initial_knowledge() { return {1u, 2u, 4u}; }

inline void absorb_stage(Knowledge& know, int multicaster) {
    for (auto& mask : know) mask |= 1u << (multicaster - 1);
}

/// Bandwidth expansion of one multicast stage. The two receivers' residual
/// entropies come from their current holdings; equal residuals reduce the
/// cooperative scheme to common-rate greedy multicast, otherwise the stage
/// delegates to the side-information scheme (coop with optimized feedback,
/// or the degraded-set benchmark).
inline StageReport stage_tau(int multicaster, const Knowledge& know, const EntropyBundle& b,
                             const ChannelGains& g, double P, Scheme scheme,
                             const ConferenceScan& scan = {}) {
    if (multicaster < 1 || multicaster > 3)
        throw std::invalid_argument("stage_tau: multicaster must be in 1..3");
    int j = multicaster == 1 ? 2 : 1;
    int k = multicaster == 3 ? 2 : 3;
    // a receiver already holding S_multicaster has zero residual
    auto residual = [&](int node) {
        VarSet mask = know[node - 1];
        if (mask & (1u << (multicaster - 1))) return 0.0;
        return b.cond(multicaster, mask);
    };
    double rj = residual(j);
    double rk = residual(k);
    StageReport rep;
    rep.multicaster = multicaster;
    rep.receivers = {j, k};
    rep.residuals = {rj, rk};
    rep.scheme = scheme;

    ChannelGains stage_g{g.gain(multicaster, j), g.gain(multicaster, k), g.gain(j, k)};
    if (scheme == Scheme::coop && std::abs(rj - rk) <= 1e-12) {
        // final-stage form: both receivers need the same bits
        if (rj <= 0.0) return rep;
        MulticastOpt mo = rate_greedy_mc_opt(stage_g, P, scan.mc);
        if (!(mo.rate > 0.0)) {
            rep.tau = kInf;
            rep.feasible = false;
            return rep;
        }
        rep.tau = rj / mo.rate;
        rep.alpha = mo.alpha;
        return rep;
    }
    SideInfoInstance inst{stage_g, P, rj, rk};
    TauResult t = scheme == Scheme::coop ? tau_coop_fb_opt(inst, scan.fb) : tau_degraded(inst);
    rep.tau = t.tau;
    rep.alpha = t.alpha;
    rep.feasible = t.feasible;
    return rep;
}

/// Memoizes the 12 distinct (multicaster, previous-multicaster-set) stages
/// of one (instance, P, scheme) triple; shared by every order and by the
/// greedy scheduler.
class StageCache {
public:
    StageCache(const EntropyBundle& b, const ChannelGains& g, double P, Scheme scheme,
               const ConferenceScan& scan)
        : b_(b), g_(g), P_(P), scheme_(scheme), scan_(scan) {}

    const StageReport& get(int multicaster, VarSet prev) {
        auto& slot = slots_[multicaster - 1][prev & 7u];
        if (!slot) {
            Knowledge know = initial_knowledge();
            for (int n = 1; n <= 3; ++n)
                if (prev & (1u << (n - 1))) absorb_stage(know, n);
            slot = stage_tau(multicaster, know, b_, g_, P_, scheme_, scan_);
        }
        return *slot;
    }

private:
    const EntropyBundle& b_;
    const ChannelGains& g_;
    double P_;
    Scheme scheme_;
    const ConferenceScan& scan_;
    std::array<std::array<std::optional<StageReport>, 8>, 3> slots_{};
};

struct ScheduleReport {
    std::array<int, 3> order{1, 2, 3};
    std::array<StageReport, 3> stages{};
    double total = 0.0;
    bool feasible = true;
};

namespace detail {

inline ScheduleReport total_from_cache(const std::array<int, 3>& order, StageCache& cache) {
    ScheduleReport rep;
    rep.order = order;
    VarSet prev = 0;
    for (int s = 0; s < 3; ++s) {
        rep.stages[s] = cache.get(order[s], prev);
        rep.total += rep.stages[s].tau;
        rep.feasible = rep.feasible && rep.stages[s].feasible;
        prev |= 1u << (order[s] - 1);
    }
    if (!rep.feasible) rep.total = kInf;
    return rep;
}

inline ScheduleReport optimal_from_cache(StageCache& cache);
inline ScheduleReport greedy_from_cache(StageCache& cache);

} // namespace detail

inline const std::array<std::array<int, 3>, 6>& all_orders() {
    static const std::array<std::array<int, 3>, 6> orders{{{1, 2, 3},
                                                           {1, 3, 2},
                                                           {2, 1, 3},
                                                           {2, 3, 1},
                                                           {3, 1, 2},
                                                           {3, 2, 1}}};
    return orders;
}

namespace detail {

inline ScheduleReport optimal_from_cache(StageCache& cache) {
    ScheduleReport best;
    bool first = true;
    for (const auto& ord : all_orders()) {
        ScheduleReport rep = total_from_cache(ord, cache);
        if (first || rep.total < best.total) {
            best = rep;
            first = false;
        }
    }
    return best;
}

inline ScheduleReport greedy_from_cache(StageCache& cache) {
    ScheduleReport rep;
    VarSet prev = 0;
    for (int s = 0; s < 3; ++s) {
        int pick = 0;
        double pick_v = kInf;
        for (int m = 1; m <= 3; ++m) {
            if (prev & (1u << (m - 1))) continue;
            const StageReport& cand = cache.get(m, prev);
            double v = cand.feasible ? cand.tau : kInf;
            if (pick == 0 || v < pick_v) {
                pick = m;
                pick_v = v;
            }
        }
        rep.order[s] = pick;
        rep.stages[s] = cache.get(pick, prev);
        rep.total += rep.stages[s].tau;
        rep.feasible = rep.feasible && rep.stages[s].feasible;
        prev |= 1u << (pick - 1);
    }
    if (!rep.feasible) rep.total = kInf;
    return rep;
}

} // namespace detail

/// Sum of stage taus along a fixed multicast order, updating holdings.
inline ScheduleReport total_tau(const std::array<int, 3>& order, const EntropyBundle& b,
                                const ChannelGains& g, double P, Scheme scheme,
                                const ConferenceScan& scan = {}) {
    StageCache cache(b, g, P, scheme, scan);
    return detail::total_from_cache(order, cache);
}

/// argmin of total_tau over all six orders; lexicographically first on ties.
inline ScheduleReport optimal_schedule(const EntropyBundle& b, const ChannelGains& g, double P,
                                       Scheme scheme, const ConferenceScan& scan = {}) {
    StageCache cache(b, g, P, scheme, scan);
    return detail::optimal_from_cache(cache);
}

/// Stage-wise scheduler: always multicast the remaining node with the least
/// expected stage tau given current holdings; lowest node index on ties.
inline ScheduleReport greedy_schedule(const EntropyBundle& b, const ChannelGains& g, double P,
                                      Scheme scheme, const ConferenceScan& scan = {}) {
    StageCache cache(b, g, P, scheme, scan);
    return detail::greedy_from_cache(cache);
}

// -------------------------
// Minimum energy over the power grid
// -------------------------

enum class ScheduleMode { optimal, greedy };

struct MinEnergy {
    double energy = kInf;
    double p_star = 0.0;
    bool feasible = false;
};

struct EnergyGrid {
    double log10_lo = -6.0;
    double log10_hi = 2.0;
    int per_decade = 60;
    int refine_iters = 40;
};

namespace detail {

template <typename TotalFn>
MinEnergy min_energy_over_grid(TotalFn&& total_at, const EnergyGrid& grid) {
    int steps = int(std::lround((grid.log10_hi - grid.log10_lo) * grid.per_decade));
    double best_e = kInf, best_l = grid.log10_lo;
    for (int i = 0; i <= steps; ++i) {
        double l = grid.log10_lo + double(i) / grid.per_decade;
        double e = total_at(std::pow(10.0, l)) * std::pow(10.0, l);
        if (e < best_e) {
            best_e = e;
            best_l = l;
        }
    }
    if (std::isinf(best_e)) return {};
    // golden-section polish on log10 P within one grid step of the argmin
    double a = std::max(grid.log10_lo, best_l - 1.0 / grid.per_decade);
    double c = std::min(grid.log10_hi, best_l + 1.0 / grid.per_decade);
    const double gr = 0.6180339887498949;
    double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
    auto eval = [&](double l) {
        double P = std::pow(10.0, l);
        return total_at(P) * P;
    };
    double f1 = eval(x1), f2 = eval(x2);
    for (int it = 0; it < grid.refine_iters; ++it) {
        if (f1 < f2) {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - gr * (c - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (c - a);
            f2 = eval(x2);
        }
    }
    for (double l : {x1, x2}) {
        double e = eval(l);
        if (e < best_e) {
            best_e = e;
            best_l = l;
        }
    }
    return {best_e, std::pow(10.0, best_l), true};
}

} // namespace detail

/// Minimum of total_tau(P) * P over the logarithmic power grid with local
/// refinement; returns the minimizing power.
inline MinEnergy min_energy_conference(const EntropyBundle& b, const ChannelGains& g, Scheme scheme,
                                       ScheduleMode mode, const ConferenceScan& scan = {},
                                       const EnergyGrid& grid = {}) {
    auto total_at = [&](double P) {
        StageCache cache(b, g, P, scheme, scan);
        return mode == ScheduleMode::optimal ? detail::optimal_from_cache(cache).total
                                             : detail::greedy_from_cache(cache).total;
    };
    return detail::min_energy_over_grid(total_at, grid);
}

/// Minimum of genie_tau(P) * P over the same grid.
inline MinEnergy min_energy_genie(const EntropyBundle& b, const ChannelGains& g,
                                  const EnergyGrid& grid = {}) {
    return detail::min_energy_over_grid([&](double P) { return genie_tau(b, g, P); }, grid);
}

/// All four conference energies of one instance, sharing per-power stage
/// caches between the two cooperative schedulers.
struct ConferenceEnergies {
    MinEnergy genie, coop_optimal, coop_greedy, degraded_optimal;
};

inline ConferenceEnergies conference_energies(const EntropyBundle& b, const ChannelGains& g,
                                              const ConferenceScan& scan = {},
                                              const EnergyGrid& grid = {}) {
    ConferenceEnergies out;
    int steps = int(std::lround((grid.log10_hi - grid.log10_lo) * grid.per_decade));
    std::array<double, 4> best_e{kInf, kInf, kInf, kInf};
    std::array<double, 4> best_l{grid.log10_lo, grid.log10_lo, grid.log10_lo, grid.log10_lo};
    for (int i = 0; i <= steps; ++i) {
        double l = grid.log10_lo + double(i) / grid.per_decade;
        double P = std::pow(10.0, l);
        // genie energy is nondecreasing in P and lower-bounds every scheme,
        // so a scheme whose incumbent minimum lies below the current genie
        // energy cannot improve at any larger P and stops being evaluated
        double gen_e = genie_tau(b, g, P) * P;
        if (gen_e < best_e[0]) {
            best_e[0] = gen_e;
            best_l[0] = l;
        }
        bool need_coop = !(std::isfinite(best_e[1]) && std::isfinite(best_e[2]) &&
                           gen_e > std::max(best_e[1], best_e[2]));
        bool need_deg = !(std::isfinite(best_e[3]) && gen_e > best_e[3]);
        if (!need_coop && !need_deg) break;
        std::array<double, 4> e{gen_e, kInf, kInf, kInf};
        if (need_coop) {
            StageCache coop(b, g, P, Scheme::coop, scan);
            e[1] = detail::optimal_from_cache(coop).total * P;
            e[2] = detail::greedy_from_cache(coop).total * P;
        }
        if (need_deg) {
            StageCache deg(b, g, P, Scheme::degraded, scan);
            e[3] = detail::optimal_from_cache(deg).total * P;
        }
        for (int k = 1; k < 4; ++k)
            if (e[k] < best_e[k]) {
                best_e[k] = e[k];
                best_l[k] = l;
            }
    }
    auto refine = [&](int k, auto&& total_fn) -> MinEnergy {
        if (std::isinf(best_e[k])) return {};
        double a = std::max(grid.log10_lo, best_l[k] - 1.0 / grid.per_decade);
        double c = std::min(grid.log10_hi, best_l[k] + 1.0 / grid.per_decade);
        auto eval = [&](double l) {
            double P = std::pow(10.0, l);
            return total_fn(P) * P;
        };
        const double gr = 0.6180339887498949;
        double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
        double f1 = eval(x1), f2 = eval(x2);
        for (int it = 0; it < grid.refine_iters; ++it) {
            if (f1 < f2) {
                c = x2;
                x2 = x1;
                f2 = f1;
                x1 = c - gr * (c - a);
                f1 = eval(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (c - a);
                f2 = eval(x2);
            }
        }
        MinEnergy m{best_e[k], std::pow(10.0, best_l[k]), true};
        for (auto [l, f] : {std::pair{x1, f1}, std::pair{x2, f2}})
            if (f < m.energy) m = {f, std::pow(10.0, l), true};
        return m;
    };
    out.genie = refine(0, [&](double P) { return genie_tau(b, g, P); });
    out.coop_optimal = refine(1, [&](double P) {
        StageCache c(b, g, P, Scheme::coop, scan);
        return detail::optimal_from_cache(c).total;
    });
    out.coop_greedy = refine(2, [&](double P) {
        StageCache c(b, g, P, Scheme::coop, scan);
        return detail::greedy_from_cache(c).total;
    });
    out.degraded_optimal = refine(3, [&](double P) {
        StageCache c(b, g, P, Scheme::degraded, scan);
        return detail::optimal_from_cache(c).total;
    });
    return out;
}

} // namespace trinet
