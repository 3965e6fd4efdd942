#include "coexist/frame.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coexist {

int FrameConfig::minislots_per_tti() const {
    const double ratio = embb_tti_s / mini_slot_s;
    return static_cast<int>(std::lround(ratio));
}

void FrameConfig::validate() const {
    if (embb_tti_s <= 0.0 || mini_slot_s <= 0.0)
        throw std::invalid_argument("frame: TTI and mini-slot must be > 0");
    if (rb_count < 1) throw std::invalid_argument("frame: rb_count must be >= 1");
    const double ratio = embb_tti_s / mini_slot_s;
    const double rounded = std::lround(ratio);
    if (rounded < 1.0 || std::fabs(ratio - rounded) > 1e-9)
        throw std::invalid_argument("frame: TTI must be an integer multiple of mini-slot");
}

FrameGrid::FrameGrid(int rb_count, int minislots)
    : rbs_(rb_count), slots_(minislots), cells_(static_cast<size_t>(rb_count) * minislots) {
    if (rb_count < 1 || minislots < 1)
        throw std::invalid_argument("frame grid: dimensions must be >= 1");
}

std::vector<UserProfile> generate_topology(Rng& rng, int n_embb, int n_urllc,
                                           double radius_m) {
    if (n_embb < 0 || n_urllc < 0)
        throw std::invalid_argument("topology: counts must be >= 0");
    if (radius_m <= 0.0) throw std::invalid_argument("topology: radius must be > 0");

    std::vector<UserProfile> users;
    users.reserve(static_cast<size_t>(n_embb) + n_urllc);
    for (int i = 0; i < n_embb + n_urllc; ++i) {
        // sqrt(u) radial profile makes the draw uniform over the disc area.
        double r = radius_m * std::sqrt(rng.next_double());
        const double angle = 2.0 * std::numbers::pi * rng.next_double();
        if (r < 1.0) r = 1.0;
        UserProfile u;
        u.id = i;
        u.role = i < n_embb ? Role::Embb : Role::Urllc;
        u.x = r * std::cos(angle);
        u.y = r * std::sin(angle);
        u.distance_m = r;
        users.push_back(u);
    }
    return users;
}

std::vector<UserProfile> generate_topology(std::uint64_t seed, int n_embb, int n_urllc,
                                           double radius_m) {
    Rng rng(seed);
    return generate_topology(rng, n_embb, n_urllc, radius_m);
}

std::vector<int> draw_arrivals(Rng& rng, double rate_per_slot, int minislots) {
    if (rate_per_slot < 0.0) throw std::invalid_argument("arrivals: rate must be >= 0");
    std::vector<int> counts(static_cast<size_t>(std::max(0, minislots)));
    for (auto& c : counts) c = rng.poisson(rate_per_slot);
    return counts;
}

std::vector<int> draw_arrivals(std::uint64_t seed, double rate_per_slot, int minislots) {
    Rng rng(seed);
    return draw_arrivals(rng, rate_per_slot, minislots);
}

void assign_embb(FrameGrid& grid, const std::vector<EmbbCandidate>& users) {
    if (users.empty()) {
        if (grid.rb_count() > 0)
            throw std::invalid_argument("assign_embb: no eMBB users for a nonempty grid");
        return;
    }
    std::vector<EmbbCandidate> sorted = users;
    std::sort(sorted.begin(), sorted.end(), [](const EmbbCandidate& a, const EmbbCandidate& b) {
        if (a.gain != b.gain) return a.gain > b.gain;
        return a.id < b.id;
    });
    for (int rb = 0; rb < grid.rb_count(); ++rb) {
        const int owner = sorted[rb % sorted.size()].id;
        for (int slot = 0; slot < grid.minislots(); ++slot) grid.cell(rb, slot).embb_owner = owner;
    }
}

}  // namespace coexist
