#pragma once

#include <string>
#include <vector>

#include "coexist/config.hpp"
#include "coexist/scheduler.hpp"

namespace coexist {

struct SweepSpec {
    std::vector<int> urllc_counts;  // defaults to {cfg.n_urllc}
    std::vector<double> epsilons;   // defaults to {cfg.error_target}
};

struct ResultRow {
    std::string scheme;
    int n_urllc = 0;
    double epsilon = 0.0;
    int seed = 0;
    double embb_rate_bps = 0.0;   // time-averaged network rate
    double bs_profit = 0.0;       // per-TTI average
    double urllc_utility = 0.0;   // per-TTI average
    long drops = 0;
    // Extra run diagnostics; not part of the CSV contract.
    long arrivals = 0;
    long scheduled = 0;
    long superposed = 0;
    double min_delivered_rate_bps = 0.0;
    int max_place_delay_slots = 0;
    double runtime_s = 0.0;
};

// One (scheme, sweep point, seed) Monte-Carlo run. Topology and arrival
// streams are keyed only by the master seed and seed index, so paired schemes
// and reliability points see identical traffic.
ResultRow run_single(const ScenarioConfig& base, Scheme scheme, int n_urllc,
                     double epsilon, int seed_index);

// Runs the full sweep; worker count from COEXIST_THREADS when set. Rows come
// back sorted by (scheme, n_urllc, epsilon, seed) regardless of scheduling.
std::vector<ResultRow> run_experiment(const ScenarioConfig& base, const SweepSpec& sweep,
                                      const std::vector<Scheme>& schemes);

// Pinned CSV contract: header
//   scheme,n_urllc,epsilon,seed,embb_rate_bps,bs_profit,urllc_utility,drops
// then one row per ResultRow, '.' decimals, LF line ends. Rows with duplicate
// (scheme, n_urllc, epsilon, seed) keys are rejected.
std::string rows_to_csv(const std::vector<ResultRow>& rows);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

// "a:b:step" inclusive integer range.
std::vector<int> parse_int_range(const std::string& text);
// Comma-separated doubles.
std::vector<double> parse_double_list(const std::string& text);

}  // namespace coexist
