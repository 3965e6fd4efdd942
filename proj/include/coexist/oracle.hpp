#pragma once

#include <string>
#include <vector>

#include "coexist/matching.hpp"
#include "coexist/scheduler.hpp"

namespace coexist {

// A scheduling instance small enough to enumerate exhaustively.
struct TinyInstance {
    int n_embb = 2;
    int n_urllc = 2;
    int rb_count = 2;
    int minislots = 8;
    std::vector<double> power_grid_w;  // ascending discrete power levels
    std::vector<UserProfile> users;    // eMBB ids first, then URLLC ids
    std::vector<int> arrival_slots;    // one packet per URLLC user
};

// Users on a disc capped at 800 m so every packet is servable at the power
// cap; sizes stay within full-enumeration bounds.
TinyInstance random_tiny_instance(Rng& rng, const Scenario& scenario);

// Scenario resized to the instance (RB count, user counts); everything else
// inherited.
Scenario tiny_scenario(const Scenario& base, const TinyInstance& inst);

struct OraclePick {
    int user = -1;
    int rb = -1;
    int slot = -1;
    SchemeChoice choice = SchemeChoice::Puncture;
    double power_w = 0.0;
};

struct OracleResult {
    bool feasible = false;
    double objective_bits = 0.0;
    std::vector<OraclePick> best;
    std::string violated_constraint;  // set when infeasible
    long long states_checked = 0;
};

// Exact optimum of the scheduling problem on a tiny instance: every packet
// placed in its arrival or next mini-slot, per-cell exclusivity, reliability
// at the chosen grid power under the scheme's own SINR, objective identical
// to objective_value.
OracleResult solve_milp_bruteforce(const TinyInstance& inst, const Scenario& scenario);

struct HeuristicResult {
    double objective_bits = 0.0;
    long scheduled = 0;
    long drops = 0;
    long superposed = 0;
};

// Runs the mini-slot scheduler over the same instance and arrival pattern.
HeuristicResult run_heuristic(const TinyInstance& inst, const Scenario& scenario,
                              Scheme scheme);

// Objective change from moving any one superposed pick of the heuristic down
// a single power-grid step; the dominance check allows this much slack.
double grid_step_slack_bits(const TinyInstance& inst, const Scenario& scenario);

// All one-to-one partial matchings with zero blocking pairs. The candidate
// count (sum over k of C(n,k) C(m,k) k!) is reported through the out-param.
std::vector<Matching> enumerate_stable_matchings(
    const std::vector<PreferenceProfile>& embb_prefs,
    const std::vector<PreferenceProfile>& urllc_prefs,
    long long* candidates_checked = nullptr);

enum class OraclePricingMode { Bundle, FlatCostless, IrViolating };

struct EquivalenceReport {
    long long assignments = 0;
    bool degenerate_pricing = false;  // profit constant, correlation undefined
    bool p14_feasible = false;        // some assignment satisfies IR
    bool argmax_within_range = false; // profit maximizer's bits inside feasible range
    double rank_correlation = 0.0;    // Spearman between bits and profit
};

// Compares the eMBB-volume objective against the profit objective over every
// feasible assignment of a tiny instance.
EquivalenceReport check_equivalence_property(const TinyInstance& inst,
                                             const Scenario& scenario,
                                             OraclePricingMode mode);

}  // namespace coexist
