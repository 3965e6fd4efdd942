#include "coexist/scheduler.hpp"

#include <algorithm>
#include <cmath>

namespace coexist {

Topology make_topology(const Scenario& scenario, Rng& rng) {
    Topology topo;
    topo.users = generate_topology(rng, scenario.cfg.n_embb, scenario.cfg.n_urllc,
                                   scenario.cfg.radius_m);
    topo.links.reserve(topo.users.size());
    for (const auto& user : topo.users) {
        topo.links.push_back(scenario.link_for(user));
        (user.role == Role::Embb ? topo.embb_ids : topo.urllc_ids).push_back(user.id);
    }
    return topo;
}

PowerAllocation allocate_power(const phy::LinkState& urllc_link, double target_rate_bps,
                               const phy::RadioParams& params, double rel_tol) {
    PowerAllocation result;
    if (target_rate_bps <= 0.0) {
        result.feasible = true;
        return result;
    }
    const double q_inv = phy::q_inverse(params.error_target);
    auto rate_at = [&](double power_w) {
        return phy::fbl_rate_bps_with_qinv(power_w * urllc_link.gain / params.noise_w,
                                           params.packet_bits, q_inv,
                                           params.rb_bandwidth_hz);
    };

    double hi = params.urllc_max_power_w;
    if (rate_at(hi) < target_rate_bps) {
        result.feasible = false;
        result.power_w = hi;
        result.achieved_rate_bps = rate_at(hi);
        return result;
    }
    double lo = 0.0;
    for (int i = 0; i < 200 && (hi - lo) > 0.5 * rel_tol * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (rate_at(mid) >= target_rate_bps)
            hi = mid;
        else
            lo = mid;
    }
    result.feasible = true;
    result.power_w = hi;
    result.achieved_rate_bps = rate_at(hi);
    return result;
}

const char* scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::Contract: return "contract";
        case Scheme::Puncture: return "puncture";
        case Scheme::NoUrllc: return "nourllc";
    }
    return "?";
}

double objective_value(const FrameGrid& grid, const Topology& topology,
                       const Scenario& scenario) {
    const double slot_s = scenario.frame.mini_slot_s;
    double bits = 0.0;
    for (int rb = 0; rb < grid.rb_count(); ++rb) {
        for (int slot = 0; slot < grid.minislots(); ++slot) {
            const Cell& cell = grid.cell(rb, slot);
            if (cell.embb_owner < 0) continue;
            if (cell.mode == CellMode::Puncture) continue;
            const phy::LinkState& owner = topology.links[cell.embb_owner];
            double rate;
            if (cell.mode == CellMode::Superpose && !scenario.cfg.perfect_sic) {
                const phy::LinkState& occupant = topology.links[cell.urllc_occupant];
                rate = phy::shannon_rate_bps(
                    phy::sinr(scenario.radio.embb_power_w, owner.gain,
                              cell.urllc_power_w * occupant.gain, scenario.radio.noise_w),
                    scenario.radio.rb_bandwidth_hz);
            } else {
                rate = phy::shannon_rate_bps(
                    phy::sinr(scenario.radio.embb_power_w, owner.gain, 0.0,
                              scenario.radio.noise_w),
                    scenario.radio.rb_bandwidth_hz);
            }
            bits += slot_s * rate;
        }
    }
    return bits;
}

RunSimulator::RunSimulator(const Scenario& scenario, Topology topology, Scheme scheme)
    : scenario_(scenario),
      topology_(std::move(topology)),
      scheme_(scheme),
      grid_(scenario.frame.rb_count, scenario.frame.minislots_per_tti()) {
    std::vector<EmbbCandidate> candidates;
    for (int id : topology_.embb_ids) candidates.push_back({id, topology_.links[id].gain});
    assign_embb(grid_, candidates);

    for (int rb = 0; rb < grid_.rb_count(); ++rb) {
        const int owner = grid_.cell(rb, 0).embb_owner;
        auto it = std::find(owner_ids_.begin(), owner_ids_.end(), owner);
        if (it == owner_ids_.end()) {
            owner_ids_.push_back(owner);
            owner_rbs_.push_back({rb});
        } else {
            owner_rbs_[it - owner_ids_.begin()].push_back(rb);
        }
        rb_clean_rate_bps_.push_back(phy::shannon_rate_bps(
            phy::sinr(scenario_.radio.embb_power_w, topology_.links[owner].gain, 0.0,
                      scenario_.radio.noise_w),
            scenario_.radio.rb_bandwidth_hz));
    }
}

bool RunSimulator::user_pending(int user_id) const {
    return std::any_of(pending_.begin(), pending_.end(),
                       [user_id](const PendingPacket& p) { return p.user == user_id; });
}

void RunSimulator::record_overflow_arrivals(int count) {
    metrics_.arrivals += count;
    metrics_.drops += count;
}

void RunSimulator::begin_tti() {
    // Fresh grid, same static owners.
    for (int rb = 0; rb < grid_.rb_count(); ++rb)
        for (int slot = 0; slot < grid_.minislots(); ++slot) {
            Cell& cell = grid_.cell(rb, slot);
            cell.urllc_occupant = -1;
            cell.mode = CellMode::None;
            cell.urllc_power_w = 0.0;
        }
    tti_packets_.clear();
    slot_in_tti_ = 0;
}

void RunSimulator::step_slot(const std::vector<int>& arriving_users) {
    const int slot = slot_in_tti_++;
    const int global_slot = tti_index_ * grid_.minislots() + slot;
    for (int user : arriving_users) {
        pending_.push_back({user, global_slot});
        ++metrics_.arrivals;
    }
    if (scheme_ != Scheme::NoUrllc) schedule_minislot(slot, global_slot);
    // Anything still waiting past its one-slot grace window is dropped.
    std::erase_if(pending_, [&](const PendingPacket& p) {
        if (p.arrival_slot + 1 <= global_slot) {
            ++metrics_.drops;
            return true;
        }
        return false;
    });
}

void RunSimulator::end_tti() {
    const double tti_bits = objective_value(grid_, topology_, scenario_);
    metrics_.embb_bits += tti_bits;

    double urllc_prices = 0.0, urllc_cost = 0.0, utility = 0.0;
    for (const auto& pkt : tti_packets_) {
        urllc_prices += pkt.price;
        urllc_cost += scenario_.pricing.cost_per_bps * pkt.delivered_rate_bps;
        utility += pkt.utility;
    }
    const double embb_prices =
        scenario_.pricing.beta_e * static_cast<double>(owner_ids_.size());
    const double embb_cost =
        scenario_.pricing.cost_per_bps * tti_bits / scenario_.frame.embb_tti_s;
    metrics_.bs_profit += scenario_.pricing.xi * (urllc_prices + embb_prices) -
                          scenario_.pricing.zeta * (urllc_cost + embb_cost);
    metrics_.urllc_utility += utility;
    metrics_.ttis += 1;
    ++tti_index_;
}

void RunSimulator::run_tti(const std::vector<std::vector<int>>& arrivals_per_slot) {
    begin_tti();
    for (int slot = 0; slot < grid_.minislots(); ++slot) {
        if (slot < static_cast<int>(arrivals_per_slot.size()))
            step_slot(arrivals_per_slot[slot]);
        else
            step_slot({});
    }
    end_tti();
}

void RunSimulator::finish() {
    metrics_.drops += static_cast<long>(pending_.size());
    pending_.clear();
}

void RunSimulator::schedule_minislot(int slot_in_tti, int global_slot) {
    if (pending_.empty() || owner_ids_.empty()) return;

    std::sort(pending_.begin(), pending_.end(),
              [](const PendingPacket& a, const PendingPacket& b) {
                  if (a.arrival_slot != b.arrival_slot) return a.arrival_slot < b.arrival_slot;
                  return a.user < b.user;
              });

    // Matching between this slot's pending users and the RB owners.
    std::vector<std::pair<int, double>> owner_gains;
    for (int owner : owner_ids_) owner_gains.emplace_back(owner, topology_.links[owner].gain);
    std::vector<std::pair<int, double>> pending_types;
    for (const auto& p : pending_) {
        const int tier = scenario_.ladder.classify(topology_.users[p.user].distance_m);
        pending_types.emplace_back(p.user, scenario_.ladder.type_values[tier]);
    }
    std::vector<PreferenceProfile> urllc_prefs;
    for (const auto& p : pending_)
        urllc_prefs.push_back(
            build_urllc_prefs(p.user, owner_gains, scenario_.cfg.urllc_pref_order));
    std::vector<PreferenceProfile> embb_prefs;
    for (int owner : owner_ids_) embb_prefs.push_back(build_embb_prefs(owner, pending_types));

    const Matching matching = deferred_acceptance(embb_prefs, urllc_prefs);
    if (matching.size() > matching_snapshot_.size()) matching_snapshot_ = matching;

    // Matched packets land on their partner's RB first, the rest fall back to
    // any free cell; identical placement under every scheme.
    std::vector<PendingPacket> still_pending;
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& packet : pending_) {
            const bool matched = matching.partner_of_urllc(packet.user).has_value();
            if ((pass == 0) != matched) continue;
            if (!place_packet(packet, slot_in_tti, global_slot, matching))
                still_pending.push_back(packet);
        }
    }
    std::sort(still_pending.begin(), still_pending.end(),
              [](const PendingPacket& a, const PendingPacket& b) {
                  if (a.arrival_slot != b.arrival_slot) return a.arrival_slot < b.arrival_slot;
                  return a.user < b.user;
              });
    pending_ = std::move(still_pending);
}

bool RunSimulator::place_packet(const PendingPacket& packet, int slot_in_tti,
                                int global_slot, const Matching& matching) {
    const UserProfile& user = topology_.users[packet.user];
    const phy::LinkState& urllc_link = topology_.links[packet.user];
    const int tier = scenario_.ladder.classify(user.distance_m);
    const ContractItem& item = scenario_.bundle.items[tier];

    const PowerAllocation power =
        allocate_power(urllc_link, item.promised_rate_bps, scenario_.radio);
    if (!power.feasible && scenario_.cfg.drop_on_infeasible_power) {
        ++metrics_.drops;
        return true;  // resolved (dropped), not pending
    }

    // Cell selection: the matched partner's lowest free RB, else the lowest
    // free cell anywhere.
    const auto partner = matching.partner_of_urllc(packet.user);
    int rb = -1;
    if (partner) {
        const auto it = std::find(owner_ids_.begin(), owner_ids_.end(), *partner);
        for (int candidate : owner_rbs_[it - owner_ids_.begin()]) {
            if (grid_.cell_free(candidate, slot_in_tti)) {
                rb = candidate;
                break;
            }
        }
    }
    if (rb < 0) {
        for (int candidate = 0; candidate < grid_.rb_count(); ++candidate) {
            if (grid_.cell_free(candidate, slot_in_tti)) {
                rb = candidate;
                break;
            }
        }
    }
    if (rb < 0) return false;  // no room this mini-slot; caller keeps it pending

    SchemeChoice choice = SchemeChoice::Puncture;
    if (scheme_ == Scheme::Contract && power.feasible) {
        GateInput gate;
        gate.embb_link = partner ? topology_.links[*partner]
                                 : topology_.links[grid_.cell(rb, slot_in_tti).embb_owner];
        gate.urllc_link = urllc_link;
        gate.urllc_power_w = power.power_w;
        gate.required_rate_bps = scenario_.required_rate_bps;
        gate.matched = partner.has_value();
        const double threshold = superposition_gate(gate, scenario_.radio, scenario_.ladder);
        if (scenario_.ladder.type_values[tier] >= threshold) choice = SchemeChoice::Superpose;
    }

    Cell& cell = grid_.cell(rb, slot_in_tti);
    cell.urllc_occupant = packet.user;
    cell.mode = choice == SchemeChoice::Superpose ? CellMode::Superpose : CellMode::Puncture;
    cell.urllc_power_w = power.power_w;

    PacketRecord record;
    record.user = packet.user;
    record.tier = tier;
    record.choice = choice;
    record.power_w = power.power_w;
    record.delivered_rate_bps = power.achieved_rate_bps;
    record.price = item.price;
    record.incentive = choice == SchemeChoice::Superpose ? item.incentive : 0.0;
    record.utility = urllc_utility(item, choice, scenario_.ladder.type_values[tier]);
    record.arrival_slot = packet.arrival_slot;
    record.placed_slot = global_slot;
    tti_packets_.push_back(record);

    ++metrics_.scheduled;
    if (choice == SchemeChoice::Superpose)
        ++metrics_.superposed;
    else
        ++metrics_.punctured;
    metrics_.min_delivered_rate_bps =
        std::min(metrics_.min_delivered_rate_bps, power.achieved_rate_bps);
    metrics_.max_place_delay_slots =
        std::max(metrics_.max_place_delay_slots, global_slot - packet.arrival_slot);
    return true;
}

}  // namespace coexist
