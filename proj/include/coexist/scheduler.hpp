#pragma once

#include <limits>
#include <vector>

#include "coexist/config.hpp"
#include "coexist/contract.hpp"
#include "coexist/frame.hpp"
#include "coexist/matching.hpp"

namespace coexist {

struct Topology {
    std::vector<UserProfile> users;     // indexed by id
    std::vector<phy::LinkState> links;  // indexed by id
    std::vector<int> embb_ids;
    std::vector<int> urllc_ids;
};

Topology make_topology(const Scenario& scenario, Rng& rng);

struct PowerAllocation {
    bool feasible = false;
    double power_w = 0.0;
    double achieved_rate_bps = 0.0;
};

// Minimal transmit power whose interference-free short-code rate reaches the
// target, by bisection on the monotone rate function; clamped to the cap.
// Returns the feasible (upper) side of the final bracket, so backing the
// result off by twice the tolerance violates the requirement again.
PowerAllocation allocate_power(const phy::LinkState& urllc_link, double target_rate_bps,
                               const phy::RadioParams& params, double rel_tol = 1e-6);

enum class Scheme { Contract, Puncture, NoUrllc };

const char* scheme_name(Scheme scheme);

struct PacketRecord {
    int user = -1;
    int tier = -1;
    SchemeChoice choice = SchemeChoice::Puncture;
    double power_w = 0.0;
    double delivered_rate_bps = 0.0;
    double price = 0.0;
    double incentive = 0.0;
    double utility = 0.0;
    int arrival_slot = 0;  // global mini-slot index
    int placed_slot = 0;
};

struct MetricSet {
    double embb_bits = 0.0;  // objective volume over the horizon
    double bs_profit = 0.0;
    double urllc_utility = 0.0;
    long arrivals = 0;
    long scheduled = 0;
    long superposed = 0;
    long punctured = 0;
    long drops = 0;
    double min_delivered_rate_bps = std::numeric_limits<double>::infinity();
    int max_place_delay_slots = 0;
    int ttis = 0;
};

// Objective volume of one TTI grid in bits: clean mini-slots at the full
// per-RB rate, punctured ones contribute nothing, superposed ones the reduced
// pair rate for their slot fraction.
double objective_value(const FrameGrid& grid, const Topology& topology,
                       const Scenario& scenario);

// One run's scheduler. Owns the grid for the current TTI; arrivals are pushed
// in per mini-slot by the caller, which keeps arrival generation (and thus the
// random streams) identical across schemes.
class RunSimulator {
  public:
    RunSimulator(const Scenario& scenario, Topology topology, Scheme scheme);

    // Slot-level interface: a TTI is begin_tti, one step_slot per mini-slot,
    // end_tti. Arriving ids must be distinct within a slot and not currently
    // pending, which the caller can check through user_pending().
    void begin_tti();
    void step_slot(const std::vector<int>& arriving_users);
    void end_tti();

    // Convenience wrapper; arrivals_per_slot[s] lists the ids for mini-slot s.
    void run_tti(const std::vector<std::vector<int>>& arrivals_per_slot);

    // Arrivals that could not even be assigned a distinct user; counted as
    // dropped so the arrival accounting stays exact.
    void record_overflow_arrivals(int count);

    // Drops any packet still waiting at the end of the run.
    void finish();

    bool user_pending(int user_id) const;
    const MetricSet& metrics() const { return metrics_; }
    const Topology& topology() const { return topology_; }
    const Matching& matching_snapshot() const { return matching_snapshot_; }
    const FrameGrid& last_grid() const { return grid_; }
    const std::vector<PacketRecord>& last_tti_packets() const { return tti_packets_; }

  private:
    struct PendingPacket {
        int user;
        int arrival_slot;  // global mini-slot index
    };

    void schedule_minislot(int slot_in_tti, int global_slot);
    bool place_packet(const PendingPacket& packet, int slot_in_tti, int global_slot,
                      const Matching& matching);

    const Scenario& scenario_;
    Topology topology_;
    Scheme scheme_;
    FrameGrid grid_;
    std::vector<int> owner_ids_;                 // distinct owners, ascending
    std::vector<std::vector<int>> owner_rbs_;    // parallel to owner_ids_
    std::vector<double> rb_clean_rate_bps_;      // per-RB puncture-free rate
    std::vector<PendingPacket> pending_;
    std::vector<PacketRecord> tti_packets_;
    Matching matching_snapshot_;  // largest pairing seen in the run
    MetricSet metrics_;
    int tti_index_ = 0;
    int slot_in_tti_ = 0;
};

}  // namespace coexist
