// =========================
// optimize.hpp
//
// Deterministic nested-grid maximization over compact boxes, the
// affine-branch intersection solver, and low/high SNR asymptote probes.
// Reproducibility contract: identical results for identical inputs,
// ties broken by lowest grid index.
// =========================
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trinet/capacity.hpp"

namespace trinet {

struct GridSpec {
    int resolution = 33;     // points per dimension, >= 3
    int rounds = 3;          // local refinement rounds after the coarse pass
    double shrink = 0.2;     // box width factor applied per refinement round
    double tolerance = 1e-4; // target improvement scale, bits

    void validate() const {
        if (resolution < 3) throw std::invalid_argument("GridSpec: resolution must be >= 3");
        if (rounds < 0) throw std::invalid_argument("GridSpec: rounds must be >= 0");
        if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("GridSpec: shrink in (0,1)");
    }
};

struct OptResult {
    double value = -kInf;
    std::vector<double> params;
    std::int64_t evaluations = 0;
    double achieved_tolerance = kInf; // improvement gained by the final round
};

using Interval = std::pair<double, double>;

namespace detail {

// One full grid pass over `box`, row-major index order, strict improvement only.
template <typename F>
void grid_pass(F&& fn, const std::vector<Interval>& box, int res, OptResult& best) {
    const std::size_t d = box.size();
    std::vector<int> idx(d, 0);
    std::vector<double> x(d);
    for (;;) {
        for (std::size_t k = 0; k < d; ++k) {
            const auto& [lo, hi] = box[k];
            x[k] = (res == 1) ? lo : lo + (hi - lo) * idx[k] / double(res - 1);
        }
        double v = fn(std::span<const double>(x));
        ++best.evaluations;
        if (v > best.value) {
            best.value = v;
            best.params = x;
        }
        // row-major increment, last dimension fastest
        std::size_t k = d;
        while (k > 0) {
            --k;
            if (++idx[k] < res) break;
            idx[k] = 0;
            if (k == 0) return;
        }
        if (d == 0) return;
    }
}

} // namespace detail

/// Maximize fn over the box by a coarse grid pass plus `rounds` shrinking
/// local refinements around the incumbent. fn receives a span of length
/// box.size(). Deterministic; ties go to the lowest row-major grid index.
template <typename F>
OptResult maximize(F&& fn, const std::vector<Interval>& box, const GridSpec& spec = {}) {
    spec.validate();
    if (box.empty()) throw std::invalid_argument("maximize: empty box");
    if (box.size() > 5) throw std::invalid_argument("maximize: boxes above 5 dimensions unsupported");
    for (const auto& [lo, hi] : box)
        if (!(lo <= hi)) throw std::invalid_argument("maximize: malformed interval");

    OptResult best;
    detail::grid_pass(fn, box, spec.resolution, best);

    double width_factor = 1.0;
    for (int r = 0; r < spec.rounds; ++r) {
        width_factor *= spec.shrink;
        std::vector<Interval> sub(box.size());
        for (std::size_t k = 0; k < box.size(); ++k) {
            const auto& [lo, hi] = box[k];
            double half = 0.5 * (hi - lo) * width_factor;
            double c = best.params[k];
            sub[k] = {std::max(lo, c - half), std::min(hi, c + half)};
        }
        double before = best.value;
        detail::grid_pass(fn, sub, spec.resolution, best);
        best.achieved_tolerance = best.value - before;
    }
    return best;
}

/// Maximum over t in [0,1] of min(b1(t), b2(t)) for two affine branches given
/// by their endpoint values. Returns {t*, value}. The optimum sits at a branch
/// intersection or an endpoint; parallel lines resolve to the better endpoint.
struct LineCross {
    double t;
    double value;
};

inline LineCross intersect_t(double b1_at0, double b1_at1, double b2_at0, double b2_at1) {
    for (double v : {b1_at0, b1_at1, b2_at0, b2_at1})
        if (std::isnan(v)) throw std::domain_error("intersect_t: NaN branch endpoint");
    auto eval = [&](double t) {
        double b1 = b1_at0 + t * (b1_at1 - b1_at0);
        double b2 = b2_at0 + t * (b2_at1 - b2_at0);
        return std::min(b1, b2);
    };
    double best_t = 0.0, best_v = eval(0.0);
    double v1 = eval(1.0);
    if (v1 > best_v) {
        best_t = 1.0;
        best_v = v1;
    }
    double slope_diff = (b1_at1 - b1_at0) - (b2_at1 - b2_at0);
    if (slope_diff != 0.0) {
        double tc = (b2_at0 - b1_at0) / slope_diff;
        tc = std::min(1.0, std::max(0.0, tc));
        double vc = eval(tc);
        if (vc > best_v) {
            best_t = tc;
            best_v = vc;
        }
    }
    return {best_t, best_v};
}

/// Low-power slope probe: R(P) ~ (1/2)(log2 e) S P, so S = 2 R(P0)/(P0 log2 e).
/// `richardson` removes the leading O(P) bias from the two probe points.
struct SlopeEstimate {
    double value;      // raw estimate at p0
    double fine;       // raw estimate at p0/10
    double richardson; // (10*fine - value)/9
    double p0;
};

template <typename RateFn>
SlopeEstimate slope_estimate(RateFn&& rate_of_p, double p0 = 1e-4) {
    if (!(p0 > 0.0)) throw std::domain_error("slope_estimate: probe power must be positive");
    auto est = [&](double p) {
        double r = rate_of_p(p);
        if (!std::isfinite(r)) throw std::domain_error("slope_estimate: rate not finite at probe");
        return 2.0 * r / (p * kLog2E);
    };
    double s0 = est(p0);
    double s1 = est(p0 / 10.0);
    return {s0, s1, (10.0 * s1 - s0) / 9.0, p0};
}

/// High-power gain probe: R(P) ~ (1/2) log2 P + (1/2) G, so G = 2 R(P1) - log2 P1.
struct GainEstimate {
    double value;     // estimate at p1
    double check;     // estimate at 10*p1 (stability probe)
    double p1;
};

template <typename RateFn>
GainEstimate gain_estimate(RateFn&& rate_of_p, double p1 = 1e6) {
    if (!(p1 > 0.0)) throw std::domain_error("gain_estimate: probe power must be positive");
    auto est = [&](double p) {
        double r = rate_of_p(p);
        if (!std::isfinite(r)) throw std::domain_error("gain_estimate: rate not finite at probe");
        return 2.0 * r - std::log2(p);
    };
    return {est(p1), est(10.0 * p1), p1};
}

} // namespace trinet
