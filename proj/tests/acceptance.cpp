// Acceptance suite: end-to-end checks of the simulator against its contract,
// one pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "coexist/experiment.hpp"
#include "coexist/oracle.hpp"

using namespace coexist;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str());
    if (!pass) ++g_failures;
}

struct PointStats {
    double contract_rate = 0.0;
    double puncture_rate = 0.0;
    double nourllc_rate = 0.0;
    double contract_profit = 0.0;
    double puncture_profit = 0.0;
    double contract_utility = 0.0;
    double puncture_utility = 0.0;
    long contract_superposed = 0;
};

std::map<int, PointStats> aggregate_by_count(const std::vector<ResultRow>& rows,
                                             int seeds) {
    std::map<int, PointStats> stats;
    for (const auto& r : rows) {
        PointStats& s = stats[r.n_urllc];
        if (r.scheme == "contract") {
            s.contract_rate += r.embb_rate_bps / seeds;
            s.contract_profit += r.bs_profit / seeds;
            s.contract_utility += r.urllc_utility / seeds;
            s.contract_superposed += r.superposed;
        } else if (r.scheme == "puncture") {
            s.puncture_rate += r.embb_rate_bps / seeds;
            s.puncture_profit += r.bs_profit / seeds;
            s.puncture_utility += r.urllc_utility / seeds;
        } else {
            s.nourllc_rate += r.embb_rate_bps / seeds;
        }
    }
    return stats;
}

}  // namespace

int main() {
    const ScenarioConfig defaults;  // table defaults: 20 seeds, 100 TTIs
    const std::vector<int> sweep_counts = parse_int_range("5:40:5");

    // ---- criteria 1-3 and 9 share one sweep ----------------------------
    SweepSpec sweep;
    sweep.urllc_counts = sweep_counts;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = run_experiment(
        defaults, sweep, {Scheme::Contract, Scheme::Puncture, Scheme::NoUrllc});
    const double sweep_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto stats = aggregate_by_count(rows, defaults.seeds);

    // Criterion 1: contract recovers eMBB rate lost to puncturing.
    {
        bool fraction_dominates = true;
        for (const auto& [n, s] : stats)
            if (s.contract_rate / s.nourllc_rate <= s.puncture_rate / s.nourllc_rate)
                fraction_dominates = false;
        const PointStats& s30 = stats.at(30);
        const double recovery =
            (s30.contract_rate - s30.puncture_rate) / (s30.nourllc_rate - s30.puncture_rate);
        const bool in_time = sweep_seconds <= 120.0;
        char detail[160];
        std::snprintf(detail, sizeof(detail),
                      "fraction dominance %s, gap recovery at n=30 is %.1f%% (>= 40%%), "
                      "sweep took %.1f s (<= 120 s)",
                      fraction_dominates ? "holds at all 8 points" : "VIOLATED", //
                      100.0 * recovery, sweep_seconds);
        report(1, fraction_dominates && recovery >= 0.40 && in_time, detail);
    }

    // Criterion 2: BS profit band and growth.
    {
        bool in_band = true, contract_up = true, puncture_up = true;
        double prev_c = -1e300, prev_p = -1e300;
        for (const auto& [n, s] : stats) {
            const double ratio = s.contract_profit / s.puncture_profit;
            if (ratio < 0.95 || ratio > 1.10) in_band = false;
            if (s.contract_profit <= prev_c) contract_up = false;
            if (s.puncture_profit <= prev_p) puncture_up = false;
            prev_c = s.contract_profit;
            prev_p = s.puncture_profit;
        }
        char detail[160];
        std::snprintf(detail, sizeof(detail),
                      "profit ratio within [0.95, 1.10] %s; contract %s, puncturing %s "
                      "strictly increasing in the user count",
                      in_band ? "at all points" : "VIOLATED",
                      contract_up ? "is" : "IS NOT", puncture_up ? "is" : "IS NOT");
        report(2, in_band && contract_up && puncture_up, detail);
    }

    // Criterion 3: URLLC network utility dominance, exactly the incentive mass.
    {
        bool dominates = true;
        for (const auto& [n, s] : stats)
            if (s.contract_superposed >= 1 && s.contract_utility <= s.puncture_utility)
                dominates = false;

        bool exact = true;
        std::map<std::pair<int, int>, const ResultRow*> contract_rows;
        for (const auto& r : rows)
            if (r.scheme == "contract") contract_rows[{r.n_urllc, r.seed}] = &r;
        const Scenario scenario = Scenario::from_config(defaults);
        const double incentive =
            scenario.pricing.incentive_share * scenario.pricing.beta_e;
        for (const auto& r : rows) {
            if (r.scheme != "puncture") continue;
            const ResultRow* c = contract_rows.at({r.n_urllc, r.seed});
            const double gap = (c->urllc_utility - r.urllc_utility) * defaults.ttis;
            const double expected = incentive * c->superposed;
            if (std::fabs(gap - expected) > 1e-6 * std::max(1.0, std::fabs(expected)))
                exact = false;
        }
        char detail[160];
        std::snprintf(detail, sizeof(detail),
                      "contract utility exceeds puncturing at every point %s; per-seed gap "
                      "equals the superposed incentive mass %s",
                      dominates ? "(yes)" : "(VIOLATED)", exact ? "exactly" : "(VIOLATED)");
        report(3, dominates && exact, detail);
    }

    // Criterion 4: tighter reliability never raises the contract eMBB rate.
    {
        SweepSpec rel_sweep;
        rel_sweep.urllc_counts = sweep_counts;
        rel_sweep.epsilons = {1e-3, 1e-5, 1e-7};
        const auto rel_rows = run_experiment(defaults, rel_sweep, {Scheme::Contract});
        std::map<int, std::map<double, double>> by_point;  // n -> eps -> mean rate
        for (const auto& r : rel_rows)
            by_point[r.n_urllc][r.epsilon] += r.embb_rate_bps / defaults.seeds;
        bool nonincreasing = true;
        for (const auto& [n, rates] : by_point) {
            const double loose = rates.at(1e-3), mid = rates.at(1e-5), tight = rates.at(1e-7);
            if (!(loose >= mid * (1 - 1e-12) && mid >= tight * (1 - 1e-12)))
                nonincreasing = false;
        }
        report(4, nonincreasing,
               nonincreasing
                   ? "contract eMBB rate is nonincreasing as the error target tightens "
                     "through {1e-3, 1e-5, 1e-7} at every user count"
                   : "contract eMBB rate INCREASED under a tighter error target");
    }

    // Criterion 5: brute-force dominance on 100 random tiny instances.
    {
        const auto t5 = std::chrono::steady_clock::now();
        const Scenario base = Scenario::from_config(defaults);
        Rng rng(defaults.master_seed, 0, Stream::Instance);
        int dominance_ok = 0, ordering_ok = 0;
        const int instances = 100;
        for (int i = 0; i < instances; ++i) {
            const TinyInstance inst = random_tiny_instance(rng, base);
            const Scenario tiny = tiny_scenario(base, inst);
            const OracleResult oracle = solve_milp_bruteforce(inst, tiny);
            const HeuristicResult contract = run_heuristic(inst, tiny, Scheme::Contract);
            const HeuristicResult puncture = run_heuristic(inst, tiny, Scheme::Puncture);
            const double slack = grid_step_slack_bits(inst, tiny);
            // Relative guard: both sides sum identical per-cell terms in
            // different orders.
            const double float_tol = 1e-9 * (1.0 + std::fabs(oracle.objective_bits));
            if (oracle.feasible &&
                contract.objective_bits <= oracle.objective_bits + slack + float_tol)
                ++dominance_ok;
            if (contract.objective_bits >= puncture.objective_bits - float_tol)
                ++ordering_ok;
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t5).count();
        char detail[160];
        std::snprintf(detail, sizeof(detail),
                      "heuristic <= optimum in %d/100, contract >= puncture in %d/100, "
                      "%.1f s (<= 300 s)",
                      dominance_ok, ordering_ok, seconds);
        report(5, dominance_ok == instances && ordering_ok == instances && seconds <= 300.0,
               detail);
    }

    // Criterion 6: matching stability on 1000 random instances.
    {
        Rng rng(defaults.master_seed, 1, Stream::Instance);
        int stable_ok = 0, member_ok = 0;
        const int instances = 1000;
        for (int i = 0; i < instances; ++i) {
            const int n = 1 + static_cast<int>(rng.next_below(6));
            const int m = 1 + static_cast<int>(rng.next_below(6));
            std::vector<PreferenceProfile> embb, urllc;
            for (int e = 0; e < n; ++e) {
                std::vector<std::pair<int, double>> s;
                for (int u = 0; u < m; ++u) s.emplace_back(1000 + u, rng.next_double());
                embb.push_back(build_embb_prefs(e, s));
            }
            for (int u = 0; u < m; ++u) {
                std::vector<std::pair<int, double>> s;
                for (int e = 0; e < n; ++e) s.emplace_back(e, rng.next_double());
                urllc.push_back(build_urllc_prefs(1000 + u, s));
            }
            const Matching da = deferred_acceptance(embb, urllc);
            if (!has_blocking_pair(da, embb, urllc)) ++stable_ok;
            const auto stable_set = enumerate_stable_matchings(embb, urllc);
            for (const auto& s : stable_set)
                if (s == da) {
                    ++member_ok;
                    break;
                }
        }
        char detail[120];
        std::snprintf(detail, sizeof(detail),
                      "zero blocking pairs in %d/1000, member of the enumerated stable set "
                      "in %d/1000",
                      stable_ok, member_ok);
        report(6, stable_ok == instances && member_ok == instances, detail);
    }

    // Criterion 7: bundle feasibility over random gate-feasible pair contexts.
    {
        const Scenario base = Scenario::from_config(defaults);
        Rng rng(defaults.master_seed, 2, Stream::Instance);
        int feasible_ok = 0, diagonal_ok = 0, contexts = 0;
        while (contexts < 1000) {
            // Draw a pair until the gate admits it at the allocated power.
            const double d_u = std::max(1.0, 1000.0 * std::sqrt(rng.next_double()));
            const double d_e = std::max(1.0, 1000.0 * std::sqrt(rng.next_double()));
            const auto urllc_link = phy::make_urllc_link(d_u);
            const auto embb_link = phy::make_embb_link(d_e);
            const int tier = base.ladder.classify(d_u);
            const auto power = allocate_power(
                urllc_link, base.bundle.items[tier].promised_rate_bps, base.radio);
            if (!power.feasible) continue;
            GateInput gate{embb_link, urllc_link, power.power_w, base.required_rate_bps,
                           true};
            if (base.ladder.type_values[tier] <
                superposition_gate(gate, base.radio, base.ladder))
                continue;
            ++contexts;

            // Randomized ladder and bundle for this context.
            const int tiers = 2 + static_cast<int>(rng.next_below(5));
            TypeLadder ladder = TypeLadder::uniform(tiers, 1000.0);
            const Bundle bundle =
                design_bundle(ladder, rng.uniform(2e6, 2e7), rng.uniform(0.05, 0.6), 0.01,
                              base.pricing);
            if (verify_feasibility(bundle, ladder).feasible()) ++feasible_ok;

            bool diagonal = true;
            for (int i = 0; i < tiers; ++i) {
                const double own =
                    urllc_utility(bundle.items[i], SchemeChoice::Puncture,
                                  ladder.type_values[i]);
                if (own <= 0.0) diagonal = false;
                for (int j = 0; j < tiers; ++j)
                    if (urllc_utility(bundle.items[j], SchemeChoice::Puncture,
                                      ladder.type_values[i]) > own + 1e-12)
                        diagonal = false;
            }
            if (diagonal) ++diagonal_ok;
        }
        char detail[140];
        std::snprintf(detail, sizeof(detail),
                      "feasibility checks pass in %d/1000 contexts, utility matrix peaks "
                      "on the diagonal in %d/1000",
                      feasible_ok, diagonal_ok);
        report(7, feasible_ok == 1000 && diagonal_ok == 1000, detail);
    }

    // Criterion 8: numeric workhorses.
    {
        bool roundtrip = true;
        for (int i = 0; i < 50; ++i) {
            const double p = std::pow(10.0, -9.0 + i * (std::log10(0.4) + 9.0) / 49.0);
            if (std::fabs(phy::q_function(phy::q_inverse(p)) - p) > 1e-9) roundtrip = false;
        }
        bool dominated = true;
        for (int gi = 1; gi <= 10; ++gi)
            for (int mi = 1; mi <= 10; ++mi) {
                const double g = 0.5 * gi, m = 120.0 * mi;
                if (phy::fbl_rate_bps(g, m, 1e-5, 5e6) >= phy::shannon_rate_bps(g, 5e6))
                    dominated = false;
            }
        const Scenario base = Scenario::from_config(defaults);
        const double q_inv = phy::q_inverse(base.radio.error_target);
        bool boundary = true;
        Rng rng(defaults.master_seed, 3, Stream::Instance);
        for (int i = 0; i < 100; ++i) {
            const auto link = phy::make_urllc_link(rng.uniform(1.0, 1000.0));
            const double target = rng.uniform(1e6, 1.2e7);
            const auto alloc = allocate_power(link, target, base.radio);
            if (!alloc.feasible) {
                boundary = false;
                continue;
            }
            const double rate = phy::fbl_rate_bps_with_qinv(
                alloc.power_w * (1.0 - 2e-6) * link.gain / base.radio.noise_w,
                base.radio.packet_bits, q_inv, base.radio.rb_bandwidth_hz);
            if (!(alloc.achieved_rate_bps >= target && rate < target)) boundary = false;
        }
        char detail[160];
        std::snprintf(detail, sizeof(detail),
                      "Q round-trip within 1e-9 (%s), short-code rate below shannon on the "
                      "grid (%s), power bisection boundary tight on 100 links (%s)",
                      roundtrip ? "yes" : "NO", dominated ? "yes" : "NO",
                      boundary ? "yes" : "NO");
        report(8, roundtrip && dominated && boundary, detail);
    }

    // Criterion 9: reliability and latency accounting from the main sweep.
    {
        const Scenario base = Scenario::from_config(defaults);
        bool reliable = true, on_time = true, accounted = true;
        for (const auto& r : rows) {
            if (r.scheme == "nourllc") continue;
            if (r.scheduled > 0 &&
                r.min_delivered_rate_bps < base.required_rate_bps * (1 - 1e-9))
                reliable = false;
            if (r.max_place_delay_slots > 1) on_time = false;
            if (r.arrivals != r.scheduled + r.drops) accounted = false;
        }
        long total_drops = 0;
        for (const auto& r : rows)
            if (r.scheme == "contract") total_drops += r.drops;
        char detail[180];
        std::snprintf(detail, sizeof(detail),
                      "every scheduled packet meets the 6.4 Mbit/s floor (%s), lands in its "
                      "arrival or next mini-slot (%s), drops reported not lost (%s; contract "
                      "drops=%ld)",
                      reliable ? "yes" : "NO", on_time ? "yes" : "NO",
                      accounted ? "yes" : "NO", total_drops);
        report(9, reliable && on_time && accounted, detail);
    }

    std::printf("%d/9 criteria passed\n", 9 - g_failures);
    return g_failures;
}
