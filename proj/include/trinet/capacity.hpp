// =========================
// capacity.hpp
//
// Scalar AWGN capacity primitives and the three-node channel model.
// Gains are amplitudes (h_ij = h_ji, noise variance 1); every formula
// consumes squared gains. Rates are in bits per channel use (log base 2).
// =========================
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace trinet {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLog2E = 1.4426950408889634; // log2(e)

/// C(x) = 1/2 log2(1 + x), the Gaussian capacity shorthand. x is an SNR.
inline double capacity(double x) {
    if (std::isnan(x) || x < 0.0)
        throw std::domain_error("capacity: SNR must be nonnegative, got " + std::to_string(x));
    if (std::isinf(x)) return kInf;
    return 0.5 * kLog2E * std::log1p(x); // log1p keeps the low-SNR regime exact
}

struct ChannelGains {
    double h12 = 0.0; // source-relay (or source to receiver 2)
    double h13 = 0.0; // source-destination (or source to receiver 3)
    double h23 = 0.0; // relay-destination (inter-receiver)

    ChannelGains() = default;
    ChannelGains(double h12_, double h13_, double h23_) : h12(h12_), h13(h13_), h23(h23_) {
        validate();
    }

    void validate() const {
        for (double h : {h12, h13, h23}) {
            if (!std::isfinite(h) || h < 0.0)
                throw std::domain_error("ChannelGains: gains must be finite and nonnegative");
        }
    }

    // gain between node a and node b, 1-based indices
    double gain(int a, int b) const {
        if (a > b) std::swap(a, b);
        if (a == 1 && b == 2) return h12;
        if (a == 1 && b == 3) return h13;
        if (a == 2 && b == 3) return h23;
        throw std::invalid_argument("ChannelGains::gain: node indices must be distinct and in 1..3");
    }
};

inline void check_power(double P) {
    if (std::isnan(P) || P < 0.0 || std::isinf(P))
        throw std::domain_error("power must be finite and nonnegative");
}

/// Amplitude from a gain expressed as a power ratio in dB (h^2 = 10^(db/10)).
inline double amplitude_from_db(double db) { return std::pow(10.0, db / 20.0); }

/// No-cooperation baseline C(h13^2 P).
inline double relay_off_rate(const ChannelGains& g, double P) {
    check_power(P);
    return capacity(g.h13 * g.h13 * P);
}

struct CutSetBounds {
    double beamforming;   // C((h13^2 + h23^2) P), perfect source-relay cooperation
    double multireceiver; // C((h13^2 + h12^2) P), perfect relay-destination cooperation
};

inline CutSetBounds cut_set_bounds(const ChannelGains& g, double P) {
    check_power(P);
    return {capacity((g.h13 * g.h13 + g.h23 * g.h23) * P),
            capacity((g.h13 * g.h13 + g.h12 * g.h12) * P)};
}

} // namespace trinet
