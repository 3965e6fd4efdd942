#include "coexist/matching.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace coexist {

int PreferenceProfile::rank_of(int counterpart) const {
    for (size_t i = 0; i < ranked.size(); ++i)
        if (ranked[i] == counterpart) return static_cast<int>(i);
    return std::numeric_limits<int>::max();
}

namespace {

PreferenceProfile build_sorted(int owner, std::vector<std::pair<int, double>> entries,
                               bool ascending) {
    PreferenceProfile prefs;
    prefs.owner = owner;
    std::sort(entries.begin(), entries.end(),
              [ascending](const auto& a, const auto& b) {
                  if (a.second != b.second)
                      return ascending ? a.second < b.second : a.second > b.second;
                  return a.first < b.first;
              });
    prefs.ranked.reserve(entries.size());
    for (const auto& [id, value] : entries) {
        prefs.ranked.push_back(id);
        prefs.score.emplace(id, value);
    }
    return prefs;
}

}  // namespace

PreferenceProfile build_urllc_prefs(int urllc_id,
                                    const std::vector<std::pair<int, double>>& embb_gains,
                                    PrefOrder order) {
    if (embb_gains.empty())
        throw std::invalid_argument("build_urllc_prefs: empty eMBB candidate list");
    return build_sorted(urllc_id, embb_gains, order == PrefOrder::AscendingGain);
}

PreferenceProfile build_embb_prefs(int embb_id,
                                   const std::vector<std::pair<int, double>>& urllc_types) {
    if (urllc_types.empty())
        throw std::invalid_argument("build_embb_prefs: empty URLLC candidate map");
    return build_sorted(embb_id, urllc_types, /*ascending=*/false);
}

void Matching::add(int embb_id, int urllc_id) {
    urllc_to_embb[urllc_id] = embb_id;
    embb_to_urllc[embb_id] = urllc_id;
}

void Matching::erase_embb(int embb_id) {
    auto it = embb_to_urllc.find(embb_id);
    if (it == embb_to_urllc.end()) return;
    urllc_to_embb.erase(it->second);
    embb_to_urllc.erase(it);
}

std::optional<int> Matching::partner_of_embb(int embb_id) const {
    auto it = embb_to_urllc.find(embb_id);
    if (it == embb_to_urllc.end()) return std::nullopt;
    return it->second;
}

std::optional<int> Matching::partner_of_urllc(int urllc_id) const {
    auto it = urllc_to_embb.find(urllc_id);
    if (it == urllc_to_embb.end()) return std::nullopt;
    return it->second;
}

Matching deferred_acceptance(std::vector<PreferenceProfile> embb_prefs,
                             std::vector<PreferenceProfile> urllc_prefs) {
    auto urllc_by_id = [&urllc_prefs](int id) -> PreferenceProfile* {
        for (auto& p : urllc_prefs)
            if (p.owner == id) return &p;
        return nullptr;
    };
    auto delete_pair = [&](PreferenceProfile& a, int b_id) {
        std::erase(a.ranked, b_id);
    };

    Matching matching;
    while (true) {
        // One proposal per still-single proposer per round; the loop ends when
        // a round passes with nobody left to propose, which also makes the
        // matching a fixed point round over round.
        bool proposed = false;
        for (auto& embb : embb_prefs) {
            if (matching.partner_of_embb(embb.owner)) continue;
            if (embb.ranked.empty()) continue;
            proposed = true;
            const int target = embb.ranked.front();
            PreferenceProfile* urllc = urllc_by_id(target);
            if (urllc == nullptr || urllc->rank_of(embb.owner) == std::numeric_limits<int>::max()) {
                delete_pair(embb, target);
                continue;
            }
            const auto current = matching.partner_of_urllc(target);
            if (!current) {
                matching.add(embb.owner, target);
                continue;
            }
            if (urllc->rank_of(embb.owner) < urllc->rank_of(*current)) {
                // New proposal wins; the displaced pair is deleted from both profiles.
                matching.erase_embb(*current);
                matching.add(embb.owner, target);
                for (auto& other : embb_prefs)
                    if (other.owner == *current) delete_pair(other, target);
                delete_pair(*urllc, *current);
            } else {
                // Rejected outright; remove the pair so it is never retried.
                delete_pair(embb, target);
                delete_pair(*urllc, embb.owner);
            }
        }
        if (!proposed) break;
    }
    return matching;
}

bool is_blocking_pair(int embb_id, int urllc_id, const Matching& matching,
                      const std::vector<PreferenceProfile>& embb_prefs,
                      const std::vector<PreferenceProfile>& urllc_prefs) {
    const PreferenceProfile* embb = nullptr;
    const PreferenceProfile* urllc = nullptr;
    for (const auto& p : embb_prefs)
        if (p.owner == embb_id) embb = &p;
    for (const auto& p : urllc_prefs)
        if (p.owner == urllc_id) urllc = &p;
    if (embb == nullptr || urllc == nullptr) return false;

    const int rank_u_at_e = embb->rank_of(urllc_id);
    const int rank_e_at_u = urllc->rank_of(embb_id);
    if (rank_u_at_e == std::numeric_limits<int>::max() ||
        rank_e_at_u == std::numeric_limits<int>::max())
        return false;  // mutually unacceptable pairs cannot block

    const auto e_partner = matching.partner_of_embb(embb_id);
    const auto u_partner = matching.partner_of_urllc(urllc_id);
    if (e_partner && *e_partner == urllc_id) return false;

    const int e_current_rank =
        e_partner ? embb->rank_of(*e_partner) : std::numeric_limits<int>::max();
    const int u_current_rank =
        u_partner ? urllc->rank_of(*u_partner) : std::numeric_limits<int>::max();
    return rank_u_at_e < e_current_rank && rank_e_at_u < u_current_rank;
}

bool has_blocking_pair(const Matching& matching,
                       const std::vector<PreferenceProfile>& embb_prefs,
                       const std::vector<PreferenceProfile>& urllc_prefs) {
    for (const auto& e : embb_prefs)
        for (const auto& u : urllc_prefs)
            if (is_blocking_pair(e.owner, u.owner, matching, embb_prefs, urllc_prefs))
                return true;
    return false;
}

}  // namespace coexist
