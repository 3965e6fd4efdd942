#include "coexist/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace coexist {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + value);
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer value for '" + key + "': " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw std::invalid_argument("config: bad boolean value for '" + key + "': " + value);
}

struct Field {
    const char* key;
    std::function<void(ScenarioConfig&, const std::string&)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

#define NUM_FIELD(key, member)                                                       \
    Field{key,                                                                       \
          [](ScenarioConfig& c, const std::string& v) { c.member = parse_double(key, v); }, \
          [](const ScenarioConfig& c) { return format_double(c.member); }}
#define INT_FIELD(key, member)                                                       \
    Field{key,                                                                       \
          [](ScenarioConfig& c, const std::string& v) {                              \
              c.member = static_cast<decltype(c.member)>(parse_int(key, v));         \
          },                                                                         \
          [](const ScenarioConfig& c) { return std::to_string(c.member); }}
#define BOOL_FIELD(key, member)                                                      \
    Field{key,                                                                       \
          [](ScenarioConfig& c, const std::string& v) { c.member = parse_bool(key, v); }, \
          [](const ScenarioConfig& c) { return c.member ? "true" : "false"; }}

const std::vector<Field>& field_registry() {
    static const std::vector<Field> fields = {
        NUM_FIELD("frame.embb_tti_ms", embb_tti_ms),
        NUM_FIELD("frame.mini_slot_ms", mini_slot_ms),
        INT_FIELD("frame.rb_count", rb_count),
        NUM_FIELD("topology.radius_m", radius_m),
        INT_FIELD("topology.n_embb", n_embb),
        INT_FIELD("topology.n_urllc", n_urllc),
        NUM_FIELD("radio.carrier_ghz", carrier_ghz),
        NUM_FIELD("radio.rb_bandwidth_mhz", rb_bandwidth_mhz),
        NUM_FIELD("radio.noise_dbm", noise_dbm),
        NUM_FIELD("radio.embb_power_mw", embb_power_mw),
        NUM_FIELD("radio.urllc_max_power_w", urllc_max_power_w),
        NUM_FIELD("radio.error_target", error_target),
        INT_FIELD("urllc.packet_bytes", packet_bytes),
        INT_FIELD("urllc.blocklength", blocklength),
        NUM_FIELD("traffic.arrival_rate", arrival_rate),
        NUM_FIELD("pathloss.embb_offset_db", embb_pathloss_offset_db),
        NUM_FIELD("pathloss.embb_slope_db", embb_pathloss_slope_db),
        NUM_FIELD("pathloss.urllc_offset_db", urllc_pathloss_offset_db),
        NUM_FIELD("pathloss.urllc_slope_db", urllc_pathloss_slope_db),
        BOOL_FIELD("phy.perfect_sic", perfect_sic),
        INT_FIELD("contract.tiers", tiers),
        NUM_FIELD("contract.rate_premium", rate_premium),
        NUM_FIELD("contract.ir_slack", ir_slack),
        NUM_FIELD("pricing.beta_u", beta_u),
        NUM_FIELD("pricing.beta_e", beta_e),
        NUM_FIELD("pricing.incentive_share", incentive_share),
        NUM_FIELD("pricing.xi", xi),
        NUM_FIELD("pricing.zeta", zeta),
        NUM_FIELD("pricing.cost_per_bps", cost_per_bps),
        Field{"matching.urllc_pref_order",
              [](ScenarioConfig& c, const std::string& v) {
                  if (v == "ascending")
                      c.urllc_pref_order = PrefOrder::AscendingGain;
                  else if (v == "descending")
                      c.urllc_pref_order = PrefOrder::DescendingGain;
                  else
                      throw std::invalid_argument(
                          "config: matching.urllc_pref_order must be ascending or descending");
              },
              [](const ScenarioConfig& c) {
                  return std::string(c.urllc_pref_order == PrefOrder::AscendingGain
                                         ? "ascending"
                                         : "descending");
              }},
        BOOL_FIELD("scheduler.drop_on_infeasible_power", drop_on_infeasible_power),
        INT_FIELD("sim.ttis", ttis),
        INT_FIELD("sim.seeds", seeds),
        INT_FIELD("sim.master_seed", master_seed),
    };
    return fields;
}

#undef NUM_FIELD
#undef INT_FIELD
#undef BOOL_FIELD

}  // namespace

void ScenarioConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("config: ") + what);
    };
    require(embb_tti_ms > 0.0, "frame.embb_tti_ms must be > 0");
    require(mini_slot_ms > 0.0, "frame.mini_slot_ms must be > 0");
    require(rb_count >= 1, "frame.rb_count must be >= 1");
    require(radius_m > 0.0, "topology.radius_m must be > 0");
    require(n_embb >= 1, "topology.n_embb must be >= 1");
    require(n_urllc >= 0, "topology.n_urllc must be >= 0");
    require(rb_bandwidth_mhz > 0.0, "radio.rb_bandwidth_mhz must be > 0");
    require(embb_power_mw > 0.0, "radio.embb_power_mw must be > 0");
    require(urllc_max_power_w > 0.0, "radio.urllc_max_power_w must be > 0");
    require(error_target > 0.0 && error_target < 0.5,
            "radio.error_target must be in (0, 0.5)");
    require(packet_bytes >= 1, "urllc.packet_bytes must be >= 1");
    require(blocklength >= 1, "urllc.blocklength must be >= 1");
    require(arrival_rate >= 0.0, "traffic.arrival_rate must be >= 0");
    require(tiers >= 1, "contract.tiers must be >= 1");
    require(rate_premium >= 0.0, "contract.rate_premium must be >= 0");
    require(ir_slack > 0.0, "contract.ir_slack must be > 0");
    require(incentive_share >= 0.0, "pricing.incentive_share must be >= 0");
    require(cost_per_bps >= 0.0, "pricing.cost_per_bps must be >= 0");
    require(ttis >= 1, "sim.ttis must be >= 1");
    require(seeds >= 1, "sim.seeds must be >= 1");

    FrameConfig frame{embb_tti_ms * 1e-3, mini_slot_ms * 1e-3, rb_count};
    frame.validate();
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool found = false;
        for (const auto& field : field_registry()) {
            if (key == field.key) {
                field.set(cfg, value);
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    for (const auto& field : field_registry())
        out << field.key << " = " << field.get(cfg) << "\n";
    return out.str();
}

Scenario Scenario::from_config(const ScenarioConfig& cfg) {
    cfg.validate();
    Scenario s;
    s.cfg = cfg;

    s.radio.noise_w = phy::dbm_to_watts(cfg.noise_dbm);
    s.radio.rb_bandwidth_hz = cfg.rb_bandwidth_mhz * 1e6;
    s.radio.carrier_hz = cfg.carrier_ghz * 1e9;
    s.radio.embb_power_w = cfg.embb_power_mw * 1e-3;
    s.radio.urllc_max_power_w = cfg.urllc_max_power_w;
    s.radio.error_target = cfg.error_target;
    s.radio.packet_bits = static_cast<double>(cfg.blocklength);
    s.radio.validate();

    s.frame.embb_tti_s = cfg.embb_tti_ms * 1e-3;
    s.frame.mini_slot_s = cfg.mini_slot_ms * 1e-3;
    s.frame.rb_count = cfg.rb_count;
    s.frame.validate();

    s.ladder = TypeLadder::uniform(cfg.tiers, cfg.radius_m);

    s.pricing.beta_u = cfg.beta_u;
    s.pricing.beta_e = cfg.beta_e;
    s.pricing.incentive_share = cfg.incentive_share;
    s.pricing.xi = cfg.xi;
    s.pricing.zeta = cfg.zeta;
    s.pricing.cost_per_bps = cfg.cost_per_bps;

    // Reliability floor: the whole packet inside one mini-slot.
    s.required_rate_bps = cfg.packet_bytes * 8.0 / s.frame.mini_slot_s;
    s.bundle = design_bundle(s.ladder, s.required_rate_bps, cfg.rate_premium, cfg.ir_slack,
                             s.pricing);
    return s;
}

Scenario Scenario::with_overrides(int n_urllc, double error_target) const {
    ScenarioConfig cfg = this->cfg;
    cfg.n_urllc = n_urllc;
    cfg.error_target = error_target;
    return from_config(cfg);
}

phy::LinkState Scenario::link_for(const UserProfile& user) const {
    return user.role == Role::Embb
               ? phy::make_link(user.distance_m, cfg.embb_pathloss_offset_db,
                                cfg.embb_pathloss_slope_db)
               : phy::make_link(user.distance_m, cfg.urllc_pathloss_offset_db,
                                cfg.urllc_pathloss_slope_db);
}

}  // namespace coexist
