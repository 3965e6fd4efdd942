#include "coexist/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace coexist {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// Draws `count` distinct users from `candidates` minus the currently pending
// ones; the shortfall is reported back so it can be dropped explicitly.
std::vector<int> pick_arrival_users(Rng& rng, const std::vector<int>& candidates,
                                    const RunSimulator& sim, int count, int& overflow) {
    std::vector<int> eligible;
    for (int id : candidates)
        if (!sim.user_pending(id)) eligible.push_back(id);
    const int take = std::min<int>(count, static_cast<int>(eligible.size()));
    overflow = count - take;
    for (int i = 0; i < take; ++i) {
        const auto j = i + static_cast<int>(rng.next_below(eligible.size() - i));
        std::swap(eligible[i], eligible[j]);
    }
    eligible.resize(take);
    std::sort(eligible.begin(), eligible.end());
    return eligible;
}

}  // namespace

ResultRow run_single(const ScenarioConfig& base, Scheme scheme, int n_urllc,
                     double epsilon, int seed_index) {
    const auto start = std::chrono::steady_clock::now();
    const Scenario scenario = Scenario::from_config(base).with_overrides(n_urllc, epsilon);

    Rng topo_rng(base.master_seed, static_cast<std::uint64_t>(seed_index), Stream::Topology);
    Topology topology = make_topology(scenario, topo_rng);
    const std::vector<int> urllc_ids = topology.urllc_ids;

    RunSimulator sim(scenario, std::move(topology), scheme);

    if (scheme != Scheme::NoUrllc) {
        Rng arrival_rng(base.master_seed, static_cast<std::uint64_t>(seed_index),
                        Stream::Arrivals);
        Rng pick_rng(base.master_seed, static_cast<std::uint64_t>(seed_index),
                     Stream::UserPick);
        const int slots = scenario.frame.minislots_per_tti();
        const double rate_per_slot = scenario.cfg.arrival_rate * n_urllc;
        for (int tti = 0; tti < scenario.cfg.ttis; ++tti) {
            const std::vector<int> counts = draw_arrivals(arrival_rng, rate_per_slot, slots);
            sim.begin_tti();
            // Users are picked slot by slot, interleaved with scheduling, so
            // the pending set seen by the sampler matches the live state.
            for (int slot = 0; slot < slots; ++slot) {
                int overflow = 0;
                const std::vector<int> arriving =
                    pick_arrival_users(pick_rng, urllc_ids, sim, counts[slot], overflow);
                if (overflow > 0) sim.record_overflow_arrivals(overflow);
                sim.step_slot(arriving);
            }
            sim.end_tti();
        }
        sim.finish();
    } else {
        for (int tti = 0; tti < scenario.cfg.ttis; ++tti) sim.run_tti({});
    }

    const MetricSet& m = sim.metrics();
    ResultRow row;
    row.scheme = scheme_name(scheme);
    row.n_urllc = n_urllc;
    row.epsilon = epsilon;
    row.seed = seed_index;
    const double horizon_s = m.ttis * scenario.frame.embb_tti_s;
    row.embb_rate_bps = horizon_s > 0.0 ? m.embb_bits / horizon_s : 0.0;
    row.bs_profit = m.ttis > 0 ? m.bs_profit / m.ttis : 0.0;
    row.urllc_utility = m.ttis > 0 ? m.urllc_utility / m.ttis : 0.0;
    row.drops = m.drops;
    row.arrivals = m.arrivals;
    row.scheduled = m.scheduled;
    row.superposed = m.superposed;
    row.min_delivered_rate_bps = m.scheduled > 0 ? m.min_delivered_rate_bps : 0.0;
    row.max_place_delay_slots = m.max_place_delay_slots;
    row.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

std::vector<ResultRow> run_experiment(const ScenarioConfig& base, const SweepSpec& sweep,
                                      const std::vector<Scheme>& schemes) {
    base.validate();
    const std::vector<int> counts =
        sweep.urllc_counts.empty() ? std::vector<int>{base.n_urllc} : sweep.urllc_counts;
    const std::vector<double> epsilons =
        sweep.epsilons.empty() ? std::vector<double>{base.error_target} : sweep.epsilons;

    struct Task {
        Scheme scheme;
        int n_urllc;
        double epsilon;
        int seed;
    };
    std::vector<Task> tasks;
    for (Scheme scheme : schemes)
        for (int n : counts)
            for (double eps : epsilons)
                for (int seed = 0; seed < base.seeds; ++seed)
                    tasks.push_back({scheme, n, eps, seed});

    std::vector<ResultRow> rows(tasks.size());
    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("COEXIST_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) workers = static_cast<unsigned>(parsed);
    }
    workers = std::max(1u, std::min<unsigned>(workers, tasks.size()));

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const size_t idx = next.fetch_add(1);
            if (idx >= tasks.size()) break;
            const Task& t = tasks[idx];
            rows[idx] = run_single(base, t.scheme, t.n_urllc, t.epsilon, t.seed);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.scheme, a.n_urllc, a.epsilon, a.seed) <
               std::tie(b.scheme, b.n_urllc, b.epsilon, b.seed);
    });
    return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
    std::set<std::tuple<std::string, int, double, int>> keys;
    std::ostringstream out;
    out << "scheme,n_urllc,epsilon,seed,embb_rate_bps,bs_profit,urllc_utility,drops\n";
    for (const auto& row : rows) {
        if (!keys.emplace(row.scheme, row.n_urllc, row.epsilon, row.seed).second)
            throw std::invalid_argument("emit_csv: duplicate row key for scheme " +
                                        row.scheme);
        out << row.scheme << ',' << row.n_urllc << ',' << format_double(row.epsilon) << ','
            << row.seed << ',' << format_double(row.embb_rate_bps) << ','
            << format_double(row.bs_profit) << ',' << format_double(row.urllc_utility)
            << ',' << row.drops << '\n';
    }
    return out.str();
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    const std::string text = rows_to_csv(rows);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
    out << text;
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

std::vector<int> parse_int_range(const std::string& text) {
    int a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0 ||
        b < a || !in.eof())
        throw std::invalid_argument("expected range a:b:step, got '" + text + "'");
    std::vector<int> values;
    for (int v = a; v <= b; v += step) values.push_back(v);
    return values;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        try {
            size_t pos = 0;
            values.push_back(std::stod(token, &pos));
            if (pos != token.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw std::invalid_argument("expected comma-separated numbers, got '" + text +
                                        "'");
        }
    }
    if (values.empty())
        throw std::invalid_argument("expected comma-separated numbers, got '" + text + "'");
    return values;
}

}  // namespace coexist
