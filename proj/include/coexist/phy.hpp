#pragma once

#include <stdexcept>

namespace coexist::phy {

// Cell-level radio constants. All powers linear watts, bandwidth in Hz.
struct RadioParams {
    double noise_w = 1.778279410038923e-13;  // -97.5 dBm
    double rb_bandwidth_hz = 5e6;            // W, per resource block
    double carrier_hz = 2e9;                 // f, informational only
    double embb_power_w = 1e-5;              // P_e, 0.01 mW per RB
    double urllc_max_power_w = 10.0;         // cap for URLLC allocation
    double error_target = 1e-5;              // decoding error target, in (0, 0.5)
    double packet_bits = 800.0;              // URLLC packet size, bits

    void validate() const;  // throws std::invalid_argument
};

// One BS->user link.
struct LinkState {
    double distance_m = 0.0;
    double pathloss_db = 0.0;
    double gain = 0.0;  // linear, 10^(-pathloss/10)
};

double dbm_to_watts(double dbm);

// Log-distance laws; valid for d >= 1 m, throw std::domain_error below that.
double pathloss_db(double distance_m, double offset_db, double slope_db);
double pathloss_embb_db(double distance_m);   // 35.3 + 37.6 log10(d)
double pathloss_urllc_db(double distance_m);  // 16.62 + 37.6 log10(d)

double gain_from_pathloss(double pathloss_db);
LinkState make_link(double distance_m, double offset_db, double slope_db);
LinkState make_embb_link(double distance_m);
LinkState make_urllc_link(double distance_m);

// signal_w * gain / (interference_w + noise_w); interference 0 gives the
// puncturing-scheme SINR.
double sinr(double signal_w, double gain, double interference_w, double noise_w);

double shannon_rate_bps(double sinr_linear, double bandwidth_hz);

// Standard normal tail probability and its inverse. q_inverse brackets by
// doubling, bisects, then polishes with Newton on erfc; |Q(x) - p| ends up
// near machine precision, well inside the 1e-10 budget.
double q_function(double x);
double q_inverse(double p);  // throws std::domain_error outside (0, 1)

// Normal-approximation achievable rate for short codes:
//   W * [ log2(1+g) - sqrt((1/m)(1 - (1+g)^-2)) * Qinv(eps)/ln2 ],
// clamped at zero. The bandwidth scales the whole bracket.
double fbl_rate_bps(double sinr_linear, double blocklength, double error_target,
                    double bandwidth_hz);
// Same formula with Qinv(error_target) already evaluated; used in hot loops.
double fbl_rate_bps_with_qinv(double sinr_linear, double blocklength, double q_inv_eps,
                              double bandwidth_hz);

struct PairRates {
    double embb_bps = 0.0;
    double urllc_bps = 0.0;
};

// Rates of a superposed (eMBB, URLLC) pair on one RB. The eMBB receiver sees
// the URLLC component as p_u * g_u interference; with perfect_sic it decodes
// and cancels that component first and takes the interference-free rate. The
// URLLC side is interference-free either way.
PairRates superposed_pair_rates(const LinkState& embb, const LinkState& urllc,
                                double embb_power_w, double urllc_power_w,
                                const RadioParams& params, bool perfect_sic = false);

}  // namespace coexist::phy
