#include "coexist/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace coexist {

namespace {

struct CellRef {
    int rb;
    int slot;
    bool operator==(const CellRef&) const = default;
};

struct Option {
    CellRef cell;
    SchemeChoice choice;
    double power_w;
    double objective_delta_bits;  // loss vs a clean mini-slot
};

struct EnumContext {
    const TinyInstance* inst;
    const Scenario* scenario;
    Topology topology;
    std::vector<int> rb_owner;
    std::vector<double> rb_clean_rate_bps;
    double base_bits = 0.0;
    double q_inv = 0.0;
    std::vector<std::vector<Option>> options;  // per URLLC user
};

Topology topology_from_instance(const TinyInstance& inst, const Scenario& scenario) {
    Topology topo;
    topo.users = inst.users;
    for (const auto& user : topo.users) {
        topo.links.push_back(scenario.link_for(user));
        (user.role == Role::Embb ? topo.embb_ids : topo.urllc_ids).push_back(user.id);
    }
    return topo;
}

EnumContext build_context(const TinyInstance& inst, const Scenario& scenario) {
    EnumContext ctx;
    ctx.inst = &inst;
    ctx.scenario = &scenario;
    ctx.topology = topology_from_instance(inst, scenario);
    ctx.q_inv = phy::q_inverse(scenario.radio.error_target);

    FrameGrid grid(inst.rb_count, inst.minislots);
    std::vector<EmbbCandidate> candidates;
    for (int id : ctx.topology.embb_ids)
        candidates.push_back({id, ctx.topology.links[id].gain});
    assign_embb(grid, candidates);

    const double slot_s = scenario.frame.mini_slot_s;
    for (int rb = 0; rb < inst.rb_count; ++rb) {
        const int owner = grid.cell(rb, 0).embb_owner;
        ctx.rb_owner.push_back(owner);
        const double clean = phy::shannon_rate_bps(
            phy::sinr(scenario.radio.embb_power_w, ctx.topology.links[owner].gain, 0.0,
                      scenario.radio.noise_w),
            scenario.radio.rb_bandwidth_hz);
        ctx.rb_clean_rate_bps.push_back(clean);
        ctx.base_bits += inst.minislots * slot_s * clean;
    }

    // Per-user feasible options under the scheme's own SINR at each grid power.
    for (size_t i = 0; i < inst.arrival_slots.size(); ++i) {
        const int user_id = ctx.topology.urllc_ids[i];
        const phy::LinkState& link = ctx.topology.links[user_id];
        std::vector<Option> user_options;
        std::vector<int> slots = {inst.arrival_slots[i]};
        if (inst.arrival_slots[i] + 1 < inst.minislots)
            slots.push_back(inst.arrival_slots[i] + 1);
        for (int rb = 0; rb < inst.rb_count; ++rb) {
            const phy::LinkState& owner = ctx.topology.links[ctx.rb_owner[rb]];
            for (int slot : slots) {
                for (double p : inst.power_grid_w) {
                    const double pun_rate = phy::fbl_rate_bps_with_qinv(
                        phy::sinr(p, link.gain, 0.0, scenario.radio.noise_w),
                        scenario.radio.packet_bits, ctx.q_inv,
                        scenario.radio.rb_bandwidth_hz);
                    if (pun_rate >= scenario.required_rate_bps) {
                        user_options.push_back({{rb, slot},
                                                SchemeChoice::Puncture,
                                                p,
                                                slot_s * ctx.rb_clean_rate_bps[rb]});
                    }
                    const double sup_rate = phy::fbl_rate_bps_with_qinv(
                        phy::sinr(p, link.gain,
                                  scenario.radio.embb_power_w * owner.gain,
                                  scenario.radio.noise_w),
                        scenario.radio.packet_bits, ctx.q_inv,
                        scenario.radio.rb_bandwidth_hz);
                    if (sup_rate >= scenario.required_rate_bps) {
                        double embb_rate;
                        if (scenario.cfg.perfect_sic) {
                            embb_rate = ctx.rb_clean_rate_bps[rb];
                        } else {
                            embb_rate = phy::shannon_rate_bps(
                                phy::sinr(scenario.radio.embb_power_w, owner.gain,
                                          p * link.gain, scenario.radio.noise_w),
                                scenario.radio.rb_bandwidth_hz);
                        }
                        user_options.push_back(
                            {{rb, slot},
                             SchemeChoice::Superpose,
                             p,
                             slot_s * (ctx.rb_clean_rate_bps[rb] - embb_rate)});
                    }
                }
            }
        }
        ctx.options.push_back(std::move(user_options));
    }
    return ctx;
}

// Visits every collision-free combination of per-user options.
void enumerate_assignments(const EnumContext& ctx,
                           const std::function<void(const std::vector<const Option*>&)>& visit,
                           long long* states_checked) {
    const size_t n = ctx.options.size();
    std::vector<const Option*> chosen(n, nullptr);
    std::vector<CellRef> used;
    std::function<void(size_t)> recurse = [&](size_t idx) {
        if (idx == n) {
            if (states_checked) ++(*states_checked);
            visit(chosen);
            return;
        }
        for (const Option& opt : ctx.options[idx]) {
            if (std::find(used.begin(), used.end(), opt.cell) != used.end()) continue;
            chosen[idx] = &opt;
            used.push_back(opt.cell);
            recurse(idx + 1);
            used.pop_back();
        }
    };
    recurse(0);
}

}  // namespace

TinyInstance random_tiny_instance(Rng& rng, const Scenario& scenario) {
    TinyInstance inst;
    inst.n_embb = 1 + static_cast<int>(rng.next_below(3));
    inst.n_urllc = 1 + static_cast<int>(rng.next_below(3));
    inst.rb_count = 2 + static_cast<int>(rng.next_below(3));
    inst.minislots = scenario.frame.minislots_per_tti();

    const double radius = std::min(scenario.cfg.radius_m, 800.0);
    for (int i = 0; i < inst.n_embb + inst.n_urllc; ++i) {
        double r = radius * std::sqrt(rng.next_double());
        if (r < 1.0) r = 1.0;
        const double angle = 2.0 * 3.141592653589793 * rng.next_double();
        UserProfile u;
        u.id = i;
        u.role = i < inst.n_embb ? Role::Embb : Role::Urllc;
        u.x = r * std::cos(angle);
        u.y = r * std::sin(angle);
        u.distance_m = r;
        inst.users.push_back(u);
    }
    for (int i = 0; i < inst.n_urllc; ++i)
        inst.arrival_slots.push_back(static_cast<int>(rng.next_below(inst.minislots - 1)));

    // Log-spaced grid from 1 uW up to the cap.
    const int levels = 8;
    const double lo = 1e-6, hi = scenario.radio.urllc_max_power_w;
    for (int k = 0; k < levels; ++k)
        inst.power_grid_w.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (levels - 1)));
    return inst;
}

Scenario tiny_scenario(const Scenario& base, const TinyInstance& inst) {
    ScenarioConfig cfg = base.cfg;
    cfg.rb_count = inst.rb_count;
    cfg.n_embb = inst.n_embb;
    cfg.n_urllc = inst.n_urllc;
    return Scenario::from_config(cfg);
}

OracleResult solve_milp_bruteforce(const TinyInstance& inst, const Scenario& scenario) {
    OracleResult result;
    const EnumContext ctx = build_context(inst, scenario);

    for (size_t i = 0; i < ctx.options.size(); ++i) {
        if (ctx.options[i].empty()) {
            result.violated_constraint =
                "reliability: no (cell, scheme, power) meets the rate floor for user " +
                std::to_string(ctx.topology.urllc_ids[i]);
            return result;
        }
    }

    double best = -1.0;
    std::vector<const Option*> best_choice;
    enumerate_assignments(
        ctx,
        [&](const std::vector<const Option*>& chosen) {
            double bits = ctx.base_bits;
            for (const Option* opt : chosen) bits -= opt->objective_delta_bits;
            if (bits > best) {
                best = bits;
                best_choice = chosen;
            }
        },
        &result.states_checked);

    if (best < 0.0) {
        result.violated_constraint =
            "scheduling: packets exceed the cells available in their latency windows";
        return result;
    }
    result.feasible = true;
    result.objective_bits = best;
    for (size_t i = 0; i < best_choice.size(); ++i) {
        const Option* opt = best_choice[i];
        result.best.push_back({ctx.topology.urllc_ids[i], opt->cell.rb, opt->cell.slot,
                               opt->choice, opt->power_w});
    }
    return result;
}

HeuristicResult run_heuristic(const TinyInstance& inst, const Scenario& scenario,
                              Scheme scheme) {
    Topology topo = topology_from_instance(inst, scenario);
    RunSimulator sim(scenario, std::move(topo), scheme);
    std::vector<std::vector<int>> arrivals(inst.minislots);
    for (size_t i = 0; i < inst.arrival_slots.size(); ++i)
        arrivals[inst.arrival_slots[i]].push_back(inst.n_embb + static_cast<int>(i));
    sim.run_tti(arrivals);
    sim.finish();
    HeuristicResult out;
    out.objective_bits = sim.metrics().embb_bits;
    out.scheduled = sim.metrics().scheduled;
    out.drops = sim.metrics().drops;
    out.superposed = sim.metrics().superposed;
    return out;
}

double grid_step_slack_bits(const TinyInstance& inst, const Scenario& scenario) {
    if (scenario.cfg.perfect_sic) return 0.0;  // objective is power-independent then
    // Largest one-cell objective change between adjacent grid powers, over all
    // (RB, user) pairs; bounds the discretization error of the oracle.
    const EnumContext ctx = build_context(inst, scenario);
    double slack = 0.0;
    const double slot_s = scenario.frame.mini_slot_s;
    for (int rb = 0; rb < inst.rb_count; ++rb) {
        const phy::LinkState& owner = ctx.topology.links[ctx.rb_owner[rb]];
        for (int u : ctx.topology.urllc_ids) {
            const phy::LinkState& link = ctx.topology.links[u];
            for (size_t k = 0; k + 1 < inst.power_grid_w.size(); ++k) {
                auto embb_rate = [&](double p) {
                    return phy::shannon_rate_bps(
                        phy::sinr(scenario.radio.embb_power_w, owner.gain, p * link.gain,
                                  scenario.radio.noise_w),
                        scenario.radio.rb_bandwidth_hz);
                };
                slack = std::max(slack, slot_s * std::fabs(embb_rate(inst.power_grid_w[k]) -
                                                           embb_rate(inst.power_grid_w[k + 1])));
            }
        }
    }
    return slack;
}

std::vector<Matching> enumerate_stable_matchings(
    const std::vector<PreferenceProfile>& embb_prefs,
    const std::vector<PreferenceProfile>& urllc_prefs, long long* candidates_checked) {
    std::vector<Matching> stable;
    long long candidates = 0;
    Matching current;
    std::function<void(size_t)> recurse = [&](size_t idx) {
        if (idx == urllc_prefs.size()) {
            ++candidates;
            if (!has_blocking_pair(current, embb_prefs, urllc_prefs)) stable.push_back(current);
            return;
        }
        const int urllc_id = urllc_prefs[idx].owner;
        recurse(idx + 1);  // leave this user unmatched
        for (const auto& embb : embb_prefs) {
            if (current.partner_of_embb(embb.owner)) continue;
            current.add(embb.owner, urllc_id);
            recurse(idx + 1);
            current.erase_embb(embb.owner);
        }
    };
    recurse(0);
    if (candidates_checked) *candidates_checked = candidates;
    return stable;
}

EquivalenceReport check_equivalence_property(const TinyInstance& inst,
                                             const Scenario& scenario,
                                             OraclePricingMode mode) {
    EquivalenceReport report;
    const EnumContext ctx = build_context(inst, scenario);
    for (const auto& opts : ctx.options)
        if (opts.empty()) return report;  // instance infeasible, nothing to rank

    // Per-user contract data for the bundle pricing mode.
    std::vector<int> tiers;
    for (int u : ctx.topology.urllc_ids)
        tiers.push_back(scenario.ladder.classify(ctx.topology.users[u].distance_m));

    const double tti_s = scenario.frame.embb_tti_s;
    std::vector<double> bits_list;
    std::vector<double> profit_list;
    std::vector<bool> ir_ok_list;

    enumerate_assignments(
        ctx,
        [&](const std::vector<const Option*>& chosen) {
            double bits = ctx.base_bits;
            double urllc_prices = 0.0, urllc_cost = 0.0;
            bool ir_ok = true;
            for (size_t i = 0; i < chosen.size(); ++i) {
                const Option* opt = chosen[i];
                bits -= opt->objective_delta_bits;
                double price = 0.0, utility = 0.0;
                const ContractItem& item = scenario.bundle.items[tiers[i]];
                switch (mode) {
                    case OraclePricingMode::Bundle:
                    case OraclePricingMode::IrViolating: {
                        ContractItem priced = item;
                        if (mode == OraclePricingMode::IrViolating)
                            priced.price =
                                priced.type_value * priced.promised_rate_bps / 1e6 + 1.0;
                        price = priced.price;
                        utility = urllc_utility(priced,
                                                opt->choice == SchemeChoice::Superpose
                                                    ? SchemeChoice::Superpose
                                                    : SchemeChoice::Puncture,
                                                scenario.ladder.type_values[tiers[i]]);
                        break;
                    }
                    case OraclePricingMode::FlatCostless:
                        price = scenario.pricing.beta_u;
                        utility = 1.0;  // flat price, IR assumed
                        break;
                }
                if (utility <= 0.0) ir_ok = false;
                urllc_prices += price;
                urllc_cost += scenario.pricing.cost_per_bps * scenario.required_rate_bps;
            }
            const double zero_cost = mode == OraclePricingMode::FlatCostless ? 0.0 : 1.0;
            const double embb_prices =
                scenario.pricing.beta_e * static_cast<double>(ctx.topology.embb_ids.size());
            const double embb_cost = scenario.pricing.cost_per_bps * bits / tti_s;
            const double profit =
                scenario.pricing.xi * (urllc_prices + embb_prices) -
                zero_cost * scenario.pricing.zeta * (urllc_cost + embb_cost);
            bits_list.push_back(bits);
            profit_list.push_back(profit);
            ir_ok_list.push_back(ir_ok);
        },
        &report.assignments);

    if (bits_list.empty()) return report;

    report.p14_feasible =
        std::any_of(ir_ok_list.begin(), ir_ok_list.end(), [](bool b) { return b; });

    const auto [profit_min, profit_max] =
        std::minmax_element(profit_list.begin(), profit_list.end());
    report.degenerate_pricing = (*profit_max - *profit_min) < 1e-12;

    // Profit maximizer's bits must land inside the feasible objective range.
    const size_t argmax = std::distance(profit_list.begin(), profit_max);
    const auto [bits_min, bits_max] = std::minmax_element(bits_list.begin(), bits_list.end());
    report.argmax_within_range =
        bits_list[argmax] >= *bits_min - 1e-9 && bits_list[argmax] <= *bits_max + 1e-9;

    if (!report.degenerate_pricing) {
        // Spearman rank correlation with tie-averaged ranks.
        auto ranks = [](const std::vector<double>& v) {
            std::vector<size_t> order(v.size());
            std::iota(order.begin(), order.end(), size_t{0});
            std::sort(order.begin(), order.end(),
                      [&v](size_t a, size_t b) { return v[a] < v[b]; });
            std::vector<double> r(v.size());
            size_t i = 0;
            while (i < order.size()) {
                size_t j = i;
                while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
                const double avg = 0.5 * (i + j) + 1.0;
                for (size_t k = i; k <= j; ++k) r[order[k]] = avg;
                i = j + 1;
            }
            return r;
        };
        const auto ra = ranks(bits_list);
        const auto rb = ranks(profit_list);
        double mean_a = 0.0, mean_b = 0.0;
        for (size_t i = 0; i < ra.size(); ++i) {
            mean_a += ra[i];
            mean_b += rb[i];
        }
        mean_a /= ra.size();
        mean_b /= rb.size();
        double cov = 0.0, var_a = 0.0, var_b = 0.0;
        for (size_t i = 0; i < ra.size(); ++i) {
            cov += (ra[i] - mean_a) * (rb[i] - mean_b);
            var_a += (ra[i] - mean_a) * (ra[i] - mean_a);
            var_b += (rb[i] - mean_b) * (rb[i] - mean_b);
        }
        if (var_a > 0.0 && var_b > 0.0)
            report.rank_correlation = cov / std::sqrt(var_a * var_b);
        else
            report.degenerate_pricing = true;
    }
    return report;
}

}  // namespace coexist
