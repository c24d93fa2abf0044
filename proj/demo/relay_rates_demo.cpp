// Minimal library tour: evaluate the relay strategies at one operating point,
// optimize them, and print the low/high SNR characteristics.
#include <cstdio>

#include "trinet/trinet.hpp"

using namespace trinet;

int main() {
    ChannelGains g{1.8, 1.0, 14.142135623730951}; // h23^2 = 200
    double P = 1.0;

    std::printf("relay-off      %.6f\n", relay_off_rate(g, P));
    std::printf("DF (pointwise) %.6f\n", rate_df(g, P, 0.6, 0.5, 0.6));
    std::printf("CF (pointwise) %.6f\n", rate_cf(g, P, 0.6, 0.6));

    RelayOpt df = rate_df_opt(g, P);
    RelayOpt cf = rate_cf_opt(g, P);
    RelayOpt fb = rate_fb_opt(g, P);
    auto bounds = cut_set_bounds(g, P);
    std::printf("DF* %.6f  CF* %.6f  FB* %.6f  (bounds %.6f / %.6f)\n", df.rate, cf.rate, fb.rate,
                bounds.beamforming, bounds.multireceiver);
    std::printf("FB* params: t=%.3f alpha=%.3f r12=%.3f\n", fb.params.t, fb.params.alpha,
                fb.params.r12);

    SlopeDfClosed s = slope_df_closed(g);
    std::printf("low-SNR DF slope %.4f in [%.4f, %.4f]\n", s.value, s.lower, s.upper);
    std::printf("high-SNR DF gain %.4f\n", gain_df_closed(g));

    // side information: residual entropies 0.9 / 0.3 bits at the receivers
    SideInfoInstance inst{{2, 1, 90}, 1.0, 0.9, 0.3};
    std::printf("tau separate %.4f degraded %.4f coop %.4f coop+fb %.4f\n",
                tau_separate(inst).tau, tau_degraded(inst).tau, tau_coop(inst).tau,
                tau_coop_fb_opt(inst).tau);
    std::printf("minimum energies: degraded %.6f coop %.6f\n",
                min_energy_degraded(0.9, 0.3, inst.g), min_energy_coop(0.9, 0.3, inst.g));
    return 0;
}
