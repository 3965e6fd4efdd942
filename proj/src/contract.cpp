#include "coexist/contract.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace coexist {

void TypeLadder::validate() const {
    if (type_values.empty() || type_values.size() != tier_radii_m.size())
        throw std::invalid_argument("ladder: type values and radii must align");
    for (size_t i = 1; i < type_values.size(); ++i) {
        if (type_values[i] >= type_values[i - 1])
            throw std::invalid_argument("ladder: type values must be strictly descending");
        if (tier_radii_m[i] <= tier_radii_m[i - 1])
            throw std::invalid_argument("ladder: tier radii must be strictly increasing");
    }
    if (tier_radii_m.front() <= 0.0)
        throw std::invalid_argument("ladder: radii must be positive");
}

TypeLadder TypeLadder::uniform(int tiers, double cell_radius_m) {
    if (tiers < 1) throw std::invalid_argument("ladder: need at least one tier");
    if (cell_radius_m <= 0.0) throw std::invalid_argument("ladder: radius must be > 0");
    TypeLadder ladder;
    ladder.type_values.reserve(tiers);
    ladder.tier_radii_m.reserve(tiers);
    for (int n = 1; n <= tiers; ++n) {
        ladder.type_values.push_back(static_cast<double>(tiers - n + 1) / tiers);
        ladder.tier_radii_m.push_back(cell_radius_m * n / tiers);
    }
    return ladder;
}

int TypeLadder::classify(double distance_m) const {
    for (size_t n = 0; n < tier_radii_m.size(); ++n)
        if (distance_m <= tier_radii_m[n]) return static_cast<int>(n);
    throw std::domain_error("classify: distance beyond the outermost tier radius");
}

Bundle design_bundle(const TypeLadder& ladder, double base_rate_bps, double rate_premium,
                     double ir_slack, const PricingParams& pricing) {
    ladder.validate();
    if (base_rate_bps <= 0.0)
        throw ContractInfeasibleError("bundle: base rate must be positive");
    if (rate_premium < 0.0)
        throw ContractInfeasibleError("bundle: negative rate premium breaks monotonicity");
    if (ir_slack <= 0.0)
        throw ContractInfeasibleError(
            "bundle: individual rationality needs strictly positive slack");

    const int n_tiers = ladder.tiers();
    Bundle bundle;
    bundle.items.resize(n_tiers);

    // Rates first: the bottom tier gets the base reliability rate, each tier
    // above it a premium step. Single-tier ladders take the base rate as-is.
    for (int n = 0; n < n_tiers; ++n) {
        auto& item = bundle.items[n];
        item.type_value = ladder.type_values[n];
        item.promised_rate_bps = base_rate_bps * (1.0 + rate_premium * (n_tiers - 1 - n));
        item.incentive = pricing.incentive_share * pricing.beta_e;
    }

    // Prices telescope upward from the bottom tier:
    //   price_N = theta_N * y_N - slack,
    //   price_n = price_{n+1} + theta_n * (y_n - y_{n+1}),
    // which binds each adjacent incentive constraint at the boundary.
    const auto mbps = [](double bps) { return bps / 1e6; };
    auto& bottom = bundle.items[n_tiers - 1];
    bottom.price = bottom.type_value * mbps(bottom.promised_rate_bps) - ir_slack;
    if (bottom.price <= 0.0)
        throw ContractInfeasibleError(
            "bundle: bottom-tier price not positive; slack exceeds theta_N * y_N");
    for (int n = n_tiers - 2; n >= 0; --n) {
        auto& item = bundle.items[n];
        const auto& below = bundle.items[n + 1];
        item.price = below.price +
                     item.type_value * (mbps(item.promised_rate_bps) -
                                        mbps(below.promised_rate_bps));
    }

    const FeasibilityReport report = verify_feasibility(bundle, ladder);
    if (!report.feasible())
        throw ContractInfeasibleError("bundle: " + report.violations.front().describe());
    return bundle;
}

double urllc_utility(const ContractItem& item, SchemeChoice scheme, double type_value) {
    const double base = type_value * item.promised_rate_bps / 1e6 - item.price;
    return scheme == SchemeChoice::Superpose ? base + item.incentive : base;
}

std::string FeasibilityViolation::describe() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::IndividualRationality:
            out << "IR violated for tier " << i + 1 << " (utility " << margin << ")";
            break;
        case Kind::IncentiveCompatibility:
            out << "IC violated: tier " << i + 1 << " prefers item " << j + 1 << " by "
                << margin;
            break;
        case Kind::Monotonicity:
            out << "promised rate not monotone between tiers " << i + 1 << " and " << j + 1;
            break;
        case Kind::Ordering:
            out << "utility/rate ordering mismatch between tiers " << i + 1 << " and "
                << j + 1;
            break;
    }
    return out.str();
}

FeasibilityReport verify_feasibility(const Bundle& bundle, const TypeLadder& ladder) {
    FeasibilityReport report;
    const int n_tiers = ladder.tiers();
    if (static_cast<int>(bundle.items.size()) != n_tiers) {
        report.violations.push_back(
            {FeasibilityViolation::Kind::Monotonicity, -1, -1, 0.0});
        return report;
    }

    // The scheme branch adds the same incentive to every item, so the checks
    // are scheme-independent; use the puncturing branch.
    auto utility = [&](int true_type, int item_idx) {
        return urllc_utility(bundle.items[item_idx], SchemeChoice::Puncture,
                             ladder.type_values[true_type]);
    };

    for (int n = 0; n < n_tiers; ++n) {
        const double own = utility(n, n);
        if (!(own > 0.0))
            report.violations.push_back(
                {FeasibilityViolation::Kind::IndividualRationality, n, n, own});
        for (int m = 0; m < n_tiers; ++m) {
            if (m == n) continue;
            const double other = utility(n, m);
            if (other > own + 1e-12)
                report.violations.push_back(
                    {FeasibilityViolation::Kind::IncentiveCompatibility, n, m, other - own});
        }
    }

    for (int n = 0; n + 1 < n_tiers; ++n) {
        if (bundle.items[n].promised_rate_bps < bundle.items[n + 1].promised_rate_bps)
            report.violations.push_back(
                {FeasibilityViolation::Kind::Monotonicity, n, n + 1, 0.0});
    }

    // Necessary condition: equilibrium utilities order exactly as promised rates.
    for (int i = 0; i < n_tiers; ++i) {
        for (int j = 0; j < n_tiers; ++j) {
            if (i == j) continue;
            const bool u_gt = utility(i, i) > utility(j, j) + 1e-12;
            const bool y_gt =
                bundle.items[i].promised_rate_bps > bundle.items[j].promised_rate_bps + 1e-9;
            if (u_gt != y_gt)
                report.violations.push_back(
                    {FeasibilityViolation::Kind::Ordering, i, j, 0.0});
        }
    }
    return report;
}

double bs_utility(std::span<const double> urllc_prices, std::span<const double> embb_prices,
                  std::span<const double> urllc_rates_bps,
                  std::span<const double> embb_rates_bps, const PricingParams& pricing) {
    double revenue = 0.0;
    for (double p : urllc_prices) revenue += p;
    for (double p : embb_prices) revenue += p;
    double cost = 0.0;
    for (double r : urllc_rates_bps) cost += pricing.cost_per_bps * r;
    for (double r : embb_rates_bps) cost += pricing.cost_per_bps * r;
    return pricing.xi * revenue - pricing.zeta * cost;
}

double superposition_gate(const GateInput& input, const phy::RadioParams& params,
                          const TypeLadder& ladder) {
    if (!input.matched) return ladder.sentinel();
    if (input.urllc_power_w <= 0.0) return ladder.sentinel();

    // (a) interference-free rate at the allocated power meets the floor.
    const double own_rate = phy::fbl_rate_bps(
        phy::sinr(input.urllc_power_w, input.urllc_link.gain, 0.0, params.noise_w),
        params.packet_bits, params.error_target, params.rb_bandwidth_hz);
    if (own_rate < input.required_rate_bps) return ladder.sentinel();

    // (b) decodability at the eMBB receiver before cancellation: the URLLC
    // component against the eMBB signal as interference. The guard band keeps
    // pairs sitting exactly on the floor (bottom-tier contracts) from flipping
    // on power-bisection jitter.
    constexpr double kSicGuardBand = 1e-3;
    const double sic_sinr =
        phy::sinr(input.urllc_power_w, input.urllc_link.gain,
                  params.embb_power_w * input.embb_link.gain, params.noise_w);
    const double sic_rate = phy::fbl_rate_bps(sic_sinr, params.packet_bits,
                                              params.error_target, params.rb_bandwidth_hz);
    if (sic_rate < input.required_rate_bps * (1.0 + kSicGuardBand)) return ladder.sentinel();

    return ladder.type_values.back();
}

}  // namespace coexist
