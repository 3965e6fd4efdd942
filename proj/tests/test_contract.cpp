#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "coexist/config.hpp"
#include "coexist/contract.hpp"
#include "coexist/rng.hpp"
#include "coexist/scheduler.hpp"

using namespace coexist;

TEST_CASE("type ladder classification") {
    const TypeLadder ladder = TypeLadder::uniform(4, 1000.0);
    CHECK(ladder.type_values == std::vector<double>{1.0, 0.75, 0.5, 0.25});
    CHECK(ladder.tier_radii_m == std::vector<double>{250.0, 500.0, 750.0, 1000.0});

    CHECK(ladder.classify(10.0) == 0);     // innermost tier
    CHECK(ladder.classify(1000.0) == 3);   // boundary belongs to the outermost
    CHECK(ladder.classify(510.0) == 2);    // third ring
    CHECK_THROWS_AS(ladder.classify(1000.5), std::domain_error);

    TypeLadder bad = ladder;
    bad.type_values[1] = 1.0;  // not strictly descending
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("urllc utility branches") {
    ContractItem item;
    item.type_value = 1.0;
    item.promised_rate_bps = 6.4e6;
    item.price = 2.0;
    item.incentive = 0.5;
    CHECK(urllc_utility(item, SchemeChoice::Superpose, 1.0) == doctest::Approx(4.9));
    CHECK(urllc_utility(item, SchemeChoice::Puncture, 1.0) == doctest::Approx(4.4));

    item.promised_rate_bps = 0.0;
    CHECK(urllc_utility(item, SchemeChoice::Puncture, 1.0) < 0.0);  // IR violation shape
}

TEST_CASE("default bundle prices telescope exactly") {
    const Scenario scenario = Scenario::from_config(ScenarioConfig{});
    const Bundle& bundle = scenario.bundle;
    REQUIRE(bundle.items.size() == 4);

    // In-test oracle: recompute the telescoped schedule from the pricing rule.
    const int n = 4;
    std::array<double, 4> rate_mbps{};
    for (int i = 0; i < n; ++i) rate_mbps[i] = 6.4 * (1.0 + 0.25 * (n - 1 - i));
    std::array<double, 4> price{};
    price[n - 1] = 0.25 * rate_mbps[n - 1] - 0.01;
    for (int i = n - 2; i >= 0; --i)
        price[i] = price[i + 1] +
                   scenario.ladder.type_values[i] * (rate_mbps[i] - rate_mbps[i + 1]);

    for (int i = 0; i < n; ++i) {
        CHECK(bundle.items[i].promised_rate_bps == doctest::Approx(rate_mbps[i] * 1e6));
        CHECK(bundle.items[i].price == doctest::Approx(price[i]).epsilon(1e-12));
        CHECK(bundle.items[i].incentive == doctest::Approx(0.5));
    }
    CHECK(verify_feasibility(bundle, scenario.ladder).feasible());
}

TEST_CASE("self-selection: the utility matrix peaks on the diagonal") {
    const Scenario scenario = Scenario::from_config(ScenarioConfig{});
    const auto& ladder = scenario.ladder;
    const auto& bundle = scenario.bundle;
    for (int true_type = 0; true_type < ladder.tiers(); ++true_type) {
        // Independent recomputation of the utility row.
        const double theta = ladder.type_values[true_type];
        const double own = theta * bundle.items[true_type].promised_rate_bps / 1e6 -
                           bundle.items[true_type].price;
        CHECK(own > 0.0);  // strict individual rationality
        for (int chosen = 0; chosen < ladder.tiers(); ++chosen) {
            const double other =
                theta * bundle.items[chosen].promised_rate_bps / 1e6 - bundle.items[chosen].price;
            CHECK(own >= other - 1e-12);
        }
    }
}

TEST_CASE("single-tier bundle: IC vacuous, IR binds the price") {
    const TypeLadder ladder = TypeLadder::uniform(1, 1000.0);
    const Bundle bundle = design_bundle(ladder, 6.4e6, 0.25, 0.01, PricingParams{});
    REQUIRE(bundle.items.size() == 1);
    CHECK(bundle.items[0].price == doctest::Approx(1.0 * 6.4 - 0.01));
    CHECK(verify_feasibility(bundle, ladder).feasible());
}

TEST_CASE("feasibility verifier flags constructed violations") {
    const Scenario scenario = Scenario::from_config(ScenarioConfig{});
    const auto& ladder = scenario.ladder;

    SUBCASE("reversed rate ordering trips the necessary condition") {
        Bundle broken = scenario.bundle;
        std::swap(broken.items[0].promised_rate_bps, broken.items[3].promised_rate_bps);
        const auto report = verify_feasibility(broken, ladder);
        CHECK_FALSE(report.feasible());
        const bool has_monotonicity = std::any_of(
            report.violations.begin(), report.violations.end(), [](const auto& v) {
                return v.kind == FeasibilityViolation::Kind::Monotonicity;
            });
        CHECK(has_monotonicity);
    }
    SUBCASE("price above theta_N * y_N breaks bottom-tier rationality") {
        Bundle broken = scenario.bundle;
        broken.items[3].price =
            broken.items[3].type_value * broken.items[3].promised_rate_bps / 1e6 + 0.1;
        const auto report = verify_feasibility(broken, ladder);
        const bool has_ir = std::any_of(
            report.violations.begin(), report.violations.end(), [](const auto& v) {
                return v.kind == FeasibilityViolation::Kind::IndividualRationality && v.i == 3;
            });
        CHECK(has_ir);
    }
    SUBCASE("equal rates at different prices make the cheap item dominant") {
        Bundle broken = scenario.bundle;
        broken.items[0].promised_rate_bps = broken.items[1].promised_rate_bps;
        broken.items[0].price = broken.items[1].price + 1.0;  // overpriced copy
        const auto report = verify_feasibility(broken, ladder);
        const bool has_ic = std::any_of(
            report.violations.begin(), report.violations.end(), [](const auto& v) {
                return v.kind == FeasibilityViolation::Kind::IncentiveCompatibility && v.i == 0;
            });
        CHECK(has_ic);
    }
}

TEST_CASE("bundle design rejects impossible inputs") {
    const TypeLadder ladder = TypeLadder::uniform(4, 1000.0);
    CHECK_THROWS_AS(design_bundle(ladder, 6.4e6, 0.25, -0.5, PricingParams{}),
                    ContractInfeasibleError);
    CHECK_THROWS_AS(design_bundle(ladder, 6.4e6, -0.1, 0.01, PricingParams{}),
                    ContractInfeasibleError);
    CHECK_THROWS_AS(design_bundle(ladder, 0.0, 0.25, 0.01, PricingParams{}),
                    ContractInfeasibleError);
    // Slack so large the bottom price would go nonpositive.
    CHECK_THROWS_AS(design_bundle(ladder, 6.4e6, 0.25, 2.0, PricingParams{}),
                    ContractInfeasibleError);
}

TEST_CASE("random ladders produce feasible bundles") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int tiers = 1 + static_cast<int>(rng.next_below(6));
        TypeLadder ladder = TypeLadder::uniform(tiers, 1000.0);
        // Jitter the type values while keeping them strictly descending.
        for (int i = 0; i < tiers; ++i)
            ladder.type_values[i] *= rng.uniform(0.9, 1.1);
        std::sort(ladder.type_values.rbegin(), ladder.type_values.rend());
        bool distinct = true;
        for (int i = 1; i < tiers; ++i)
            if (ladder.type_values[i] >= ladder.type_values[i - 1]) distinct = false;
        if (!distinct) continue;

        const double base = rng.uniform(1e6, 2e7);
        const double premium = rng.uniform(0.05, 1.0);
        const Bundle bundle = design_bundle(ladder, base, premium, 0.01, PricingParams{});
        CHECK(verify_feasibility(bundle, ladder).feasible());

        // Superposing always weakly beats puncturing at the same item: the
        // branches differ by exactly the incentive.
        for (int i = 0; i < tiers; ++i) {
            const double sup =
                urllc_utility(bundle.items[i], SchemeChoice::Superpose, ladder.type_values[i]);
            const double pun =
                urllc_utility(bundle.items[i], SchemeChoice::Puncture, ladder.type_values[i]);
            CHECK(sup - pun == doctest::Approx(bundle.items[i].incentive));
        }
    }
}

TEST_CASE("bs utility") {
    PricingParams pricing;
    SUBCASE("no users, no profit") {
        CHECK(bs_utility({}, {}, {}, {}, pricing) == 0.0);
    }
    SUBCASE("costless case is the plain price sum") {
        pricing.cost_per_bps = 0.0;
        const std::array<double, 1> bu = {10.0}, be = {1.0};
        const std::array<double, 1> ru = {6.4e6}, re = {9.8e6};
        CHECK(bs_utility(bu, be, ru, re, pricing) == doctest::Approx(11.0));
    }
    SUBCASE("default config, two users each, against a hand sum") {
        const std::array<double, 2> bu = {5.19, 1.59}, be = {1.0, 1.0};
        const std::array<double, 2> ru = {1.12e7, 6.4e6}, re = {9.8e6, 1.2e5};
        const double expected =
            1.0 * (5.19 + 1.59 + 1.0 + 1.0) -
            1.0 * (1e-8 * (1.12e7 + 6.4e6) + 1e-8 * (9.8e6 + 1.2e5));
        CHECK(bs_utility(bu, be, ru, re, PricingParams{}) == doctest::Approx(expected));
    }
}

TEST_CASE("superposition gate") {
    const Scenario scenario = Scenario::from_config(ScenarioConfig{});
    const auto& ladder = scenario.ladder;

    SUBCASE("equal gains and equal powers fail the decode condition") {
        GateInput input;
        input.embb_link = phy::make_urllc_link(100.0);  // same law -> same gain
        input.urllc_link = phy::make_urllc_link(100.0);
        input.urllc_power_w = scenario.radio.embb_power_w;
        input.required_rate_bps = scenario.required_rate_bps;
        input.matched = true;
        CHECK(superposition_gate(input, scenario.radio, ladder) == ladder.sentinel());
    }
    SUBCASE("near urllc with a far embb partner superposes") {
        const auto urllc = phy::make_urllc_link(10.0);
        const auto embb = phy::make_embb_link(900.0);
        const int tier = ladder.classify(10.0);
        const auto power =
            allocate_power(urllc, scenario.bundle.items[tier].promised_rate_bps, scenario.radio);
        REQUIRE(power.feasible);
        GateInput input{embb, urllc, power.power_w, scenario.required_rate_bps, true};
        const double threshold = superposition_gate(input, scenario.radio, ladder);
        CHECK(threshold == ladder.type_values.back());
        CHECK(ladder.type_values[tier] >= threshold);  // branch picks superposition
    }
    SUBCASE("zero power fails outright") {
        GateInput input{phy::make_embb_link(900.0), phy::make_urllc_link(10.0), 0.0,
                        scenario.required_rate_bps, true};
        CHECK(superposition_gate(input, scenario.radio, ladder) == ladder.sentinel());
    }
    SUBCASE("unmatched users are forced to puncture") {
        GateInput input{phy::make_embb_link(900.0), phy::make_urllc_link(10.0), 1e-3,
                        scenario.required_rate_bps, false};
        CHECK(superposition_gate(input, scenario.radio, ladder) == ladder.sentinel());
        // Sentinel sits strictly above every type value.
        for (double theta : ladder.type_values) CHECK(theta < ladder.sentinel());
    }
}
