#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "coexist/phy.hpp"

namespace coexist {

// Willingness tiers: theta_1 > ... > theta_N, paired with concentric distance
// breakpoints whose last entry is the cell radius.
struct TypeLadder {
    std::vector<double> type_values;
    std::vector<double> tier_radii_m;

    void validate() const;
    int tiers() const { return static_cast<int>(type_values.size()); }

    // theta_n = (N - n + 1) / N over equal-width rings.
    static TypeLadder uniform(int tiers, double cell_radius_m);

    // Smallest tier whose breakpoint covers the distance (0-based index).
    // Throws std::domain_error beyond the outermost radius.
    int classify(double distance_m) const;

    // A value strictly above theta_1; comparing any theta against it forces
    // the puncturing branch.
    double sentinel() const { return type_values.front() + 1.0; }
};

struct ContractItem {
    double type_value = 0.0;
    double promised_rate_bps = 0.0;
    double price = 0.0;      // currency, lump sum per scheduled packet
    double incentive = 0.0;  // incentive_share * beta_e, paid on superposition
};

struct Bundle {
    std::vector<ContractItem> items;  // index-aligned with the ladder tiers
};

struct PricingParams {
    double beta_u = 10.0;         // flat URLLC price, used by the oracle economics
    double beta_e = 1.0;          // eMBB price per served TTI
    double incentive_share = 0.5; // share of beta_e passed to superposing users
    double xi = 1.0;              // revenue normalizer
    double zeta = 1.0;            // cost normalizer
    double cost_per_bps = 1e-8;   // linear serving cost pi(R) = c * R
};

class ContractInfeasibleError : public std::runtime_error {
  public:
    explicit ContractInfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Screening bundle: promised rates step up with the type value
// (rate_n = base * (1 + premium * (N - n)) from the bottom tier's base), and
// prices telescope from price_N = theta_N * y_N - ir_slack so the adjacent
// incentive constraints bind. Throws ContractInfeasibleError naming the
// violated constraint when no feasible schedule exists.
Bundle design_bundle(const TypeLadder& ladder, double base_rate_bps, double rate_premium,
                     double ir_slack, const PricingParams& pricing);

enum class SchemeChoice { Superpose, Puncture };

// Utility of one URLLC user for one item. Rates enter in Mbit/s so that the
// theta * y term and the prices live on the same scale.
double urllc_utility(const ContractItem& item, SchemeChoice scheme, double type_value);

struct FeasibilityViolation {
    enum class Kind { IndividualRationality, IncentiveCompatibility, Monotonicity, Ordering };
    Kind kind;
    int i = -1;
    int j = -1;
    double margin = 0.0;
    std::string describe() const;
};

struct FeasibilityReport {
    std::vector<FeasibilityViolation> violations;
    bool feasible() const { return violations.empty(); }
};

// Checks IR (strict), IC (weak, every pair), promised-rate monotonicity, and
// the utility/rate ordering equivalence by direct enumeration over all
// (true type, chosen item) pairs.
FeasibilityReport verify_feasibility(const Bundle& bundle, const TypeLadder& ladder);

// BS profit: xi * (sum of prices) - zeta * (sum of linear serving costs).
double bs_utility(std::span<const double> urllc_prices, std::span<const double> embb_prices,
                  std::span<const double> urllc_rates_bps,
                  std::span<const double> embb_rates_bps, const PricingParams& pricing);

struct GateInput {
    phy::LinkState embb_link;
    phy::LinkState urllc_link;
    double urllc_power_w = 0.0;
    double required_rate_bps = 0.0;  // reliability floor, packet bits / mini-slot
    bool matched = false;
};

// Pair-feasibility gate deciding superposition vs puncturing. Returns theta_N
// (always passable) when, at the allocated power, (a) the interference-free
// rate meets the reliability floor and (b) the URLLC message is decodable at
// the eMBB receiver with the eMBB signal still present (the classic
// superposition SINR), so the receiver can cancel it. Anything else returns
// the sentinel above theta_1, which forces puncturing.
double superposition_gate(const GateInput& input, const phy::RadioParams& params,
                          const TypeLadder& ladder);

}  // namespace coexist
