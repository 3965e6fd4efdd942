#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coexist/contract.hpp"
#include "coexist/frame.hpp"
#include "coexist/matching.hpp"
#include "coexist/phy.hpp"

namespace coexist {

// Scenario description in the units the table parameters are quoted in.
// Parsed from / serialized to flat "section.key = value" text.
struct ScenarioConfig {
    // frame
    double embb_tti_ms = 1.0;
    double mini_slot_ms = 0.125;
    int rb_count = 8;
    // topology
    double radius_m = 1000.0;
    int n_embb = 20;
    int n_urllc = 10;
    // radio
    double carrier_ghz = 2.0;
    double rb_bandwidth_mhz = 5.0;
    double noise_dbm = -97.5;
    double embb_power_mw = 0.01;
    double urllc_max_power_w = 10.0;
    double error_target = 1e-5;
    // urllc traffic
    int packet_bytes = 100;
    int blocklength = 800;  // channel uses assumed for the packet
    double arrival_rate = 0.05;  // per URLLC user per mini-slot
    // pathloss laws
    double embb_pathloss_offset_db = 35.3;
    double embb_pathloss_slope_db = 37.6;
    double urllc_pathloss_offset_db = 16.62;
    double urllc_pathloss_slope_db = 37.6;
    // phy behavior
    bool perfect_sic = true;
    // contract
    int tiers = 4;
    double rate_premium = 0.25;
    double ir_slack = 0.01;
    // pricing
    double beta_u = 10.0;
    double beta_e = 1.0;
    double incentive_share = 0.5;
    double xi = 1.0;
    double zeta = 1.0;
    double cost_per_bps = 1e-8;
    // matching
    PrefOrder urllc_pref_order = PrefOrder::AscendingGain;
    // scheduler
    bool drop_on_infeasible_power = true;
    // simulation
    int ttis = 100;
    int seeds = 20;
    std::uint64_t master_seed = 1;

    void validate() const;  // throws std::invalid_argument naming the field
};

// Parses the flat key-value format. Unknown keys and malformed values are
// rejected with the offending key in the message.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

// Serializes every field; the defaults round-trip to the exact table text.
std::string serialize_config(const ScenarioConfig& cfg);

// Everything derived from a config that the simulator consumes directly.
struct Scenario {
    ScenarioConfig cfg;
    phy::RadioParams radio;
    FrameConfig frame;
    TypeLadder ladder;
    PricingParams pricing;
    Bundle bundle;
    double required_rate_bps = 0.0;  // packet bits / mini-slot

    static Scenario from_config(const ScenarioConfig& cfg);
    Scenario with_overrides(int n_urllc, double error_target) const;

    phy::LinkState link_for(const UserProfile& user) const;
};

}  // namespace coexist
