#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace coexist {

enum class PrefOrder { AscendingGain, DescendingGain };

// Ranked counterpart list for one user, best first. Ties break toward the
// lower id so matchings are reproducible.
struct PreferenceProfile {
    int owner = -1;
    std::vector<int> ranked;
    std::unordered_map<int, double> score;

    // Position in the ranked list; missing counterparts rank worst.
    int rank_of(int counterpart) const;
};

// URLLC side: ranks eMBB candidates by channel gain. The default ascending
// order prefers weak-gain partners, which is what makes the superposition
// gate likely to pass.
PreferenceProfile build_urllc_prefs(int urllc_id,
                                    const std::vector<std::pair<int, double>>& embb_gains,
                                    PrefOrder order = PrefOrder::AscendingGain);

// eMBB side: ranks URLLC candidates by descending type value (willingness).
PreferenceProfile build_embb_prefs(int embb_id,
                                   const std::vector<std::pair<int, double>>& urllc_types);

// One-to-one partial matching; both directions kept consistent.
struct Matching {
    std::map<int, int> urllc_to_embb;
    std::map<int, int> embb_to_urllc;

    void add(int embb_id, int urllc_id);
    void erase_embb(int embb_id);
    std::optional<int> partner_of_embb(int embb_id) const;
    std::optional<int> partner_of_urllc(int urllc_id) const;
    size_t size() const { return urllc_to_embb.size(); }
    bool operator==(const Matching& other) const {
        return urllc_to_embb == other.urllc_to_embb;
    }
};

// Deferred acceptance with eMBB users proposing. Rejected pairs are deleted
// from both profiles and the loop stops once a round leaves the matching
// unchanged. The result has no blocking pairs.
Matching deferred_acceptance(std::vector<PreferenceProfile> embb_prefs,
                             std::vector<PreferenceProfile> urllc_prefs);

// True iff e and u each strictly prefer one another to their current partners
// (being unmatched counts as worst).
bool is_blocking_pair(int embb_id, int urllc_id, const Matching& matching,
                      const std::vector<PreferenceProfile>& embb_prefs,
                      const std::vector<PreferenceProfile>& urllc_prefs);

bool has_blocking_pair(const Matching& matching,
                       const std::vector<PreferenceProfile>& embb_prefs,
                       const std::vector<PreferenceProfile>& urllc_prefs);

}  // namespace coexist
