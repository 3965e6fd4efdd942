#include "coexist/phy.hpp"

#include <algorithm>
#include <cmath>

namespace coexist::phy {

namespace {
constexpr double kLn2 = 0.6931471805599453;
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
}  // namespace

void RadioParams::validate() const {
    if (noise_w <= 0.0) throw std::invalid_argument("radio: noise power must be > 0");
    if (rb_bandwidth_hz <= 0.0) throw std::invalid_argument("radio: bandwidth must be > 0");
    if (embb_power_w <= 0.0) throw std::invalid_argument("radio: eMBB power must be > 0");
    if (urllc_max_power_w <= 0.0)
        throw std::invalid_argument("radio: URLLC max power must be > 0");
    if (!(error_target > 0.0 && error_target < 0.5))
        throw std::invalid_argument("radio: error target must be in (0, 0.5)");
    if (packet_bits < 1.0) throw std::invalid_argument("radio: packet bits must be >= 1");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double pathloss_db(double distance_m, double offset_db, double slope_db) {
    if (distance_m < 1.0)
        throw std::domain_error("pathloss law invalid below 1 m");
    return offset_db + slope_db * std::log10(distance_m);
}

double pathloss_embb_db(double distance_m) { return pathloss_db(distance_m, 35.3, 37.6); }

double pathloss_urllc_db(double distance_m) { return pathloss_db(distance_m, 16.62, 37.6); }

double gain_from_pathloss(double pl_db) { return std::pow(10.0, -pl_db / 10.0); }

LinkState make_link(double distance_m, double offset_db, double slope_db) {
    LinkState link;
    link.distance_m = distance_m;
    link.pathloss_db = pathloss_db(distance_m, offset_db, slope_db);
    link.gain = gain_from_pathloss(link.pathloss_db);
    return link;
}

LinkState make_embb_link(double distance_m) { return make_link(distance_m, 35.3, 37.6); }

LinkState make_urllc_link(double distance_m) { return make_link(distance_m, 16.62, 37.6); }

double sinr(double signal_w, double gain, double interference_w, double noise_w) {
    if (noise_w <= 0.0) throw std::domain_error("sinr: noise must be > 0");
    if (signal_w < 0.0 || gain < 0.0 || interference_w < 0.0)
        throw std::domain_error("sinr: inputs must be >= 0");
    return signal_w * gain / (interference_w + noise_w);
}

double shannon_rate_bps(double sinr_linear, double bandwidth_hz) {
    if (sinr_linear < 0.0) throw std::domain_error("shannon_rate: sinr must be >= 0");
    return bandwidth_hz * std::log2(1.0 + sinr_linear);
}

double q_function(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inverse: p must be in (0, 1)");
    if (p == 0.5) return 0.0;

    // Q is symmetric: Q(-x) = 1 - Q(x). Solve for the tail p < 0.5.
    const bool flip = p > 0.5;
    const double target = flip ? 1.0 - p : p;

    // Bracket [lo, hi] with Q(lo) > target > Q(hi).
    double lo = 0.0, hi = 1.0;
    while (q_function(hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e3) break;  // Q underflows long before this
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (q_function(mid) > target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12) break;
    }

    // Newton polish on f(x) = Q(x) - target, f'(x) = -phi(x).
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        const double f = q_function(x) - target;
        const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
        if (pdf <= 0.0) break;
        const double step = f / pdf;
        x += step;
        if (std::fabs(step) < 1e-14 * std::max(1.0, std::fabs(x))) break;
    }
    return flip ? -x : x;
}

double fbl_rate_bps_with_qinv(double sinr_linear, double blocklength, double q_inv_eps,
                              double bandwidth_hz) {
    if (sinr_linear < 0.0) throw std::domain_error("fbl_rate: sinr must be >= 0");
    if (blocklength < 1.0) throw std::domain_error("fbl_rate: blocklength must be >= 1");
    if (sinr_linear == 0.0) return 0.0;
    const double one_plus = 1.0 + sinr_linear;
    const double dispersion = 1.0 - 1.0 / (one_plus * one_plus);
    const double penalty = std::sqrt(dispersion / blocklength) * q_inv_eps / kLn2;
    const double per_use = std::log2(one_plus) - penalty;
    return std::max(0.0, bandwidth_hz * per_use);
}

double fbl_rate_bps(double sinr_linear, double blocklength, double error_target,
                    double bandwidth_hz) {
    if (!(error_target > 0.0 && error_target < 0.5))
        throw std::domain_error("fbl_rate: error target must be in (0, 0.5)");
    return fbl_rate_bps_with_qinv(sinr_linear, blocklength, q_inverse(error_target),
                                  bandwidth_hz);
}

PairRates superposed_pair_rates(const LinkState& embb, const LinkState& urllc,
                                double embb_power_w, double urllc_power_w,
                                const RadioParams& params, bool perfect_sic) {
    if (embb_power_w < 0.0 || urllc_power_w < 0.0)
        throw std::domain_error("superposed_pair_rates: powers must be >= 0");
    PairRates rates;
    const double urllc_interference = perfect_sic ? 0.0 : urllc_power_w * urllc.gain;
    rates.embb_bps = shannon_rate_bps(
        sinr(embb_power_w, embb.gain, urllc_interference, params.noise_w),
        params.rb_bandwidth_hz);
    rates.urllc_bps = fbl_rate_bps(sinr(urllc_power_w, urllc.gain, 0.0, params.noise_w),
                                   params.packet_bits, params.error_target,
                                   params.rb_bandwidth_hz);
    return rates;
}

}  // namespace coexist::phy
