// Command-line front end: Monte-Carlo sweeps over the coexistence schemes,
// the brute-force validation oracle, contract bundle dumps, and config checks.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coexist/config.hpp"
#include "coexist/experiment.hpp"
#include "coexist/oracle.hpp"

namespace {

using namespace coexist;

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

ScenarioConfig load_or_default(const std::string& path) {
    if (path.empty()) return ScenarioConfig{};
    return load_config_file(path);
}

std::vector<Scheme> schemes_from_flag(const std::string& flag) {
    if (flag == "contract") return {Scheme::Contract};
    if (flag == "puncture") return {Scheme::Puncture};
    if (flag == "nourllc") return {Scheme::NoUrllc};
    if (flag == "all") return {Scheme::Contract, Scheme::Puncture, Scheme::NoUrllc};
    throw CLI::ValidationError("--scheme must be contract|puncture|nourllc|all");
}

int cmd_run(const std::string& config_path, const std::string& scheme_flag, int seeds,
            const std::string& sweep_urllc, const std::string& sweep_epsilon,
            const std::string& out_path, const std::string& matching_path) {
    ScenarioConfig cfg = load_or_default(config_path);
    if (seeds > 0) cfg.seeds = seeds;

    SweepSpec sweep;
    if (!sweep_urllc.empty()) sweep.urllc_counts = parse_int_range(sweep_urllc);
    if (!sweep_epsilon.empty()) sweep.epsilons = parse_double_list(sweep_epsilon);

    const std::vector<ResultRow> rows =
        run_experiment(cfg, sweep, schemes_from_flag(scheme_flag));
    emit_csv(rows, out_path);
    std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";

    if (!matching_path.empty()) {
        // Snapshot of one slot's stable pairing, for plotting the pair map.
        const Scenario scenario = Scenario::from_config(cfg);
        Rng topo_rng(cfg.master_seed, 0, Stream::Topology);
        Topology topology = make_topology(scenario, topo_rng);
        const std::vector<int> urllc_ids = topology.urllc_ids;
        RunSimulator sim(scenario, std::move(topology), Scheme::Contract);
        std::vector<std::vector<int>> arrivals(scenario.frame.minislots_per_tti());
        arrivals[0] = urllc_ids;  // everyone shows up so the snapshot is full
        sim.run_tti(arrivals);
        std::ofstream out(matching_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot open " << matching_path << "\n";
            return 1;
        }
        out << "urllc_id,embb_id\n";
        for (const auto& [u, e] : sim.matching_snapshot().urllc_to_embb)
            out << u << ',' << e << '\n';
        std::cout << "wrote matching snapshot to " << matching_path << "\n";
    }
    return 0;
}

int cmd_oracle(const std::string& config_path, int instances, std::uint64_t seed,
               const std::string& out_path) {
    const ScenarioConfig cfg = load_or_default(config_path);
    const Scenario scenario = Scenario::from_config(cfg);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot open " << out_path << "\n";
        return 1;
    }
    out << "instance,n_embb,n_urllc,rb_count,oracle_bits,contract_bits,puncture_bits,"
           "slack_bits,dominance_ok,ordering_ok\n";

    Rng rng(seed, 0, Stream::Instance);
    int dominance_fail = 0, ordering_fail = 0;
    for (int i = 0; i < instances; ++i) {
        const TinyInstance inst = random_tiny_instance(rng, scenario);
        const Scenario tiny = tiny_scenario(scenario, inst);
        const OracleResult oracle = solve_milp_bruteforce(inst, tiny);
        const HeuristicResult contract = run_heuristic(inst, tiny, Scheme::Contract);
        const HeuristicResult puncture = run_heuristic(inst, tiny, Scheme::Puncture);
        const double slack = grid_step_slack_bits(inst, tiny);
        // The heuristic and the oracle sum the same per-cell terms in different
        // orders; compare with a relative guard for the float reordering.
        const double float_tol = 1e-9 * (1.0 + std::fabs(oracle.objective_bits));
        const bool dominance =
            oracle.feasible &&
            contract.objective_bits <= oracle.objective_bits + slack + float_tol;
        const bool ordering =
            contract.objective_bits >= puncture.objective_bits - float_tol;
        dominance_fail += dominance ? 0 : 1;
        ordering_fail += ordering ? 0 : 1;
        out << i << ',' << inst.n_embb << ',' << inst.n_urllc << ',' << inst.rb_count << ','
            << fmt(oracle.objective_bits) << ',' << fmt(contract.objective_bits) << ','
            << fmt(puncture.objective_bits) << ',' << fmt(slack) << ',' << (dominance ? 1 : 0)
            << ',' << (ordering ? 1 : 0) << '\n';
    }
    std::cout << "oracle report: " << instances << " instances, " << dominance_fail
              << " dominance violations, " << ordering_fail << " ordering violations\n";
    return (dominance_fail == 0 && ordering_fail == 0) ? 0 : 1;
}

int cmd_bundle_dump(const std::string& config_path, const std::string& out_path) {
    const ScenarioConfig cfg = load_or_default(config_path);
    const Scenario scenario = Scenario::from_config(cfg);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot open " << out_path << "\n";
        return 1;
    }
    out << "type_value,promised_rate_bps,price,incentive\n";
    for (const auto& item : scenario.bundle.items)
        out << fmt(item.type_value) << ',' << fmt(item.promised_rate_bps) << ','
            << fmt(item.price) << ',' << fmt(item.incentive) << '\n';
    std::cout << "wrote " << scenario.bundle.items.size() << " contract items to "
              << out_path << "\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    const ScenarioConfig cfg = load_or_default(config_path);
    cfg.validate();
    std::cout << serialize_config(cfg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"URLLC/eMBB coexistence scheduling simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path = "results.csv", matching_path;
    std::string scheme_flag = "all", sweep_urllc, sweep_epsilon;
    int seeds = 0;

    CLI::App* run = app.add_subcommand("run", "Monte-Carlo sweep over the schemes");
    run->add_option("--config", config_path, "scenario config file");
    run->add_option("--scheme", scheme_flag, "contract|puncture|nourllc|all");
    run->add_option("--seeds", seeds, "override the configured seed count");
    run->add_option("--sweep-urllc", sweep_urllc, "URLLC user counts as a:b:step");
    run->add_option("--sweep-epsilon", sweep_epsilon, "reliability targets, comma separated");
    run->add_option("--out", out_path, "output CSV path");
    run->add_option("--dump-matching", matching_path, "write a pairing snapshot CSV");

    int instances = 100;
    std::uint64_t oracle_seed = 1;
    std::string oracle_out = "oracle.csv";
    CLI::App* oracle = app.add_subcommand("oracle", "brute-force validation on tiny instances");
    oracle->add_option("--config", config_path, "scenario config file");
    oracle->add_option("--instances", instances, "number of random instances");
    oracle->add_option("--seed", oracle_seed, "instance generator seed");
    oracle->add_option("--out", oracle_out, "output CSV path");

    std::string bundle_out = "bundle.csv";
    CLI::App* bundle = app.add_subcommand("bundle-dump", "emit the contract bundle as CSV");
    bundle->add_option("--config", config_path, "scenario config file");
    bundle->add_option("--out", bundle_out, "output CSV path");

    CLI::App* validate = app.add_subcommand("validate-config", "check and echo a config");
    validate->add_option("--config", config_path, "scenario config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (run->parsed())
            return cmd_run(config_path, scheme_flag, seeds, sweep_urllc, sweep_epsilon,
                           out_path, matching_path);
        if (oracle->parsed()) return cmd_oracle(config_path, instances, oracle_seed, oracle_out);
        if (bundle->parsed()) return cmd_bundle_dump(config_path, bundle_out);
        if (validate->parsed()) return cmd_validate(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
