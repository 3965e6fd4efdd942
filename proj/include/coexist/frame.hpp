#pragma once

#include <cstdint>
#include <vector>

#include "coexist/rng.hpp"

namespace coexist {

enum class Role { Embb, Urllc };

struct UserProfile {
    int id = -1;
    Role role = Role::Embb;
    double x = 0.0;  // meters, BS at the origin
    double y = 0.0;
    double distance_m = 0.0;
};

// Timing of one eMBB TTI and its URLLC mini-slots.
struct FrameConfig {
    double embb_tti_s = 1e-3;     // T
    double mini_slot_s = 1.25e-4; // t
    int rb_count = 8;             // K

    int minislots_per_tti() const;
    void validate() const;  // T must be an exact integer multiple of t
};

enum class CellMode { None, Superpose, Puncture };

// One (RB, mini-slot) cell. A single mode enum stands in for the usual pair
// of binary superpose/puncture indicators, so at most one can ever be set.
struct Cell {
    int embb_owner = -1;
    int urllc_occupant = -1;
    CellMode mode = CellMode::None;
    double urllc_power_w = 0.0;
};

class FrameGrid {
  public:
    FrameGrid(int rb_count, int minislots);

    Cell& cell(int rb, int slot) { return cells_[rb * slots_ + slot]; }
    const Cell& cell(int rb, int slot) const { return cells_[rb * slots_ + slot]; }

    int rb_count() const { return rbs_; }
    int minislots() const { return slots_; }
    bool cell_free(int rb, int slot) const { return cell(rb, slot).urllc_occupant < 0; }

  private:
    int rbs_;
    int slots_;
    std::vector<Cell> cells_;
};

// Users i.i.d. uniform on the disc of the given radius, eMBB first then URLLC,
// ids 0..n-1. Distances below 1 m are pushed out to 1 m so the pathloss laws
// stay valid.
std::vector<UserProfile> generate_topology(Rng& rng, int n_embb, int n_urllc,
                                           double radius_m);
std::vector<UserProfile> generate_topology(std::uint64_t seed, int n_embb, int n_urllc,
                                           double radius_m);

// Per-mini-slot Poisson arrival counts.
std::vector<int> draw_arrivals(Rng& rng, double rate_per_slot, int minislots);
std::vector<int> draw_arrivals(std::uint64_t seed, double rate_per_slot, int minislots);

struct EmbbCandidate {
    int id = -1;
    double gain = 0.0;
};

// Gives every RB row one eMBB owner for the whole TTI. With more users than
// RBs the best-gain users win; with fewer, rows wrap round-robin over the
// gain-sorted users. Throws std::invalid_argument when the grid is nonempty
// and there are no users.
void assign_embb(FrameGrid& grid, const std::vector<EmbbCandidate>& users);

}  // namespace coexist
