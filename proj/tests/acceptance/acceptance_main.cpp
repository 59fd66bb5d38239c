// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion enforces both its assertion and its time budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bloomflow/commands.hpp"
#include "bloomflow/dqn.hpp"
#include "bloomflow/dqn_eviction.hpp"
#include "bloomflow/locality_lab.hpp"
#include "bloomflow/metrics.hpp"
#include "bloomflow/sim.hpp"
#include "bloomflow/stats.hpp"
#include "bloomflow/trace.hpp"

using namespace bloomflow;
namespace fs = std::filesystem;

namespace {

const fs::path kDataDir = TEST_DATA_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string random_flow_string(RandomStream& rng) {
    return FlowId{static_cast<std::uint32_t>(rng.next_u64()),
                  static_cast<std::uint32_t>(rng.next_u64())}
        .str();
}

// ---------------------------------------------------------------- criterion 1

Outcome sizing_formula() {
    struct Case {
        std::uint64_t n;
        double p;
        std::uint32_t m;
    };
    // frozen from a 60-digit decimal evaluation of ceil(-n ln P / (ln 2)^2)
    const Case table[] = {
        {55, 0.30, 138},  {55, 0.05, 343},  {32, 0.01, 307},   {16, 0.01, 154},
        {100, 0.01, 959}, {100, 0.05, 624}, {100, 0.1, 480},   {1, 0.5, 2},
        {1, 0.01, 10},    {2, 0.5, 3},      {5, 0.05, 32},     {10, 0.3, 26},
        {15, 0.1, 72},    {20, 0.2, 67},    {25, 0.15, 99},    {32, 0.001, 461},
        {45, 0.02, 367},  {55, 0.1, 264},   {55, 0.15, 218},   {55, 0.2, 185},
        {55, 0.25, 159},  {64, 0.01, 614},  {128, 0.02, 1043}, {200, 0.05, 1248},
        {500, 0.01, 4793}, {1000, 0.001, 14378}, {16, 0.3, 41}, {32, 0.3, 81},
        {250, 0.07, 1384}, {19, 0.2, 64},
    };
    int checked = 0;
    for (const auto& c : table) {
        if (compute_size(c.n, c.p).bits != c.m)
            return {false, "mismatch at n=" + std::to_string(c.n)};
        ++checked;
    }
    return {true, std::to_string(checked) + " (n, P) pairs exact"};
}

// ---------------------------------------------------------------- criterion 2

Outcome no_false_negatives() {
    RandomStream rng(88001);
    std::uint64_t rounds = 0;
    for (int filter_idx = 0; filter_idx < 20; ++filter_idx) {
        BloomFilter filter(BloomParams{500, 0.02, rng.next_u64()});
        std::vector<std::string> items;
        for (int i = 0; i < 500; ++i) items.push_back(random_flow_string(rng));
        for (const auto& s : items) filter.insert(s);
        for (const auto& s : items) {
            ++rounds;
            if (!filter.query(s))
                return {false, "false negative after " + std::to_string(rounds) + " rounds"};
        }
    }
    return {true, std::to_string(rounds) + " insert/query rounds, zero failures"};
}

// ---------------------------------------------------------------- criterion 3

Outcome fp_calibration() {
    RandomStream rng(88003);
    std::string detail;
    for (double target : {0.01, 0.05, 0.10}) {
        BloomFilter filter(BloomParams{100, target, rng.next_u64()});
        std::set<std::string> members;
        while (members.size() < 100) members.insert(random_flow_string(rng));
        for (const auto& s : members) filter.insert(s);

        std::uint64_t fp = 0, probes = 0;
        while (probes < 100000) {
            std::string s = random_flow_string(rng);
            if (members.count(s)) continue;
            ++probes;
            if (filter.query(s)) ++fp;
        }
        double rate = static_cast<double>(fp) / static_cast<double>(probes);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "P=%.2f measured %.4f; ", target, rate);
        detail += buf;
        if (rate > 2.0 * target || rate < target / 2.0)
            return {false, detail + "outside factor 2"};
    }
    return {true, detail + "all within factor 2"};
}

// ---------------------------------------------------------------- criterion 4

Outcome perturbation_exactness() {
    // (n, P) pairs that land on the four reference widths
    const BloomParams params[] = {
        {5, 0.05, 41}, {55, 0.30, 41}, {32, 0.01, 41}, {55, 0.05, 41}};
    const std::uint32_t widths[] = {32, 138, 307, 343};
    RandomStream rng(88004);
    for (int i = 0; i < 4; ++i) {
        BloomFilter filter(params[i]);
        if (filter.bit_count() != widths[i]) return {false, "unexpected m"};
        for (std::uint64_t j = 0; j < params[i].n_items; ++j)
            filter.insert(random_flow_string(rng));
        for (int p = 0; p <= 100; ++p) {
            BloomFilter flipped = filter.perturb(static_cast<double>(p), 4000 + p);
            std::uint32_t dist = 0;
            for (std::uint32_t b = 0; b < widths[i]; ++b)
                dist += filter.bits()[b] != flipped.bits()[b];
            auto expected = static_cast<std::uint32_t>(
                std::llround(p * static_cast<double>(widths[i]) / 100.0));
            if (dist != expected)
                return {false, "m=" + std::to_string(widths[i]) +
                                   " p=" + std::to_string(p) + ": Hamming " +
                                   std::to_string(dist) + " != " + std::to_string(expected)};
        }
    }
    return {true, "Hamming = round(p*m/100) for all p in 0..100, m in {32,138,307,343}"};
}

// ------------------------------------------------------- criteria 5 and 6 grid

struct LocalityGrid {
    std::vector<double> fp_rates = {0.01, 0.05, 0.10, 0.30};
    std::vector<double> flips = {5, 10, 15, 20, 25, 30};
    // rows[fp][flip]
    std::vector<std::vector<LabRow>> rows;
};

LocalityGrid run_locality_grid(const SortedFlowSpace& space, int trials) {
    LocalityGrid grid;
    std::uint64_t cell = 0;
    for (double fp : grid.fp_rates) {
        std::vector<LabRow> row;
        for (double flip : grid.flips) {
            row.push_back(aggregate_cell(space, "acceptance", 110, fp, flip, trials,
                                         combine_seed(88005, cell)));
            ++cell;
        }
        grid.rows.push_back(std::move(row));
    }
    return grid;
}

Outcome tp_retention_trend(const LocalityGrid& grid) {
    std::string detail;
    for (std::size_t f = 0; f < grid.fp_rates.size(); ++f) {
        std::vector<double> flips, tp;
        double prev = 2.0;
        for (std::size_t i = 0; i < grid.flips.size(); ++i) {
            double mean = grid.rows[f][i].tp_rate_mean;
            if (mean > prev)
                return {false, "tp rate increased at fp=" +
                                   std::to_string(grid.fp_rates[f]) +
                                   " flip=" + std::to_string(grid.flips[i])};
            prev = mean;
            flips.push_back(grid.flips[i]);
            tp.push_back(mean);
        }
        double rho = stats::spearman(flips, tp);
        char buf[48];
        std::snprintf(buf, sizeof(buf), "fp=%.2f rho=%.3f; ", grid.fp_rates[f], rho);
        detail += buf;
        if (rho > -0.9) return {false, detail + "Spearman above -0.9"};
    }
    return {true, detail + "non-increasing for every fp rate"};
}

Outcome distance_trend(const LocalityGrid& grid) {
    // Mean distance of the detected set (true and false positives pooled):
    // the per-category FP-only mean is flip-invariant under uniform
    // hashing, so the rising locality signal lives in the pooled
    // detected distance.
    std::string detail;
    for (std::size_t f = 0; f < grid.fp_rates.size(); ++f) {
        std::vector<double> flips, dist;
        for (std::size_t i = 0; i < grid.flips.size(); ++i) {
            flips.push_back(grid.flips[i]);
            dist.push_back(grid.rows[f][i].det_dist_mean);
        }
        double rho = stats::spearman(flips, dist);
        char buf[48];
        std::snprintf(buf, sizeof(buf), "fp=%.2f rho=%.3f; ", grid.fp_rates[f], rho);
        detail += buf;
        if (rho < 0.8) return {false, detail + "Spearman below 0.8"};
    }
    return {true, detail + "distance rises with flip pct"};
}

// ---------------------------------------------------------------- criterion 7

Outcome design_point_band(const SortedFlowSpace& space) {
    const int trials = 1000;
    LabRow low = aggregate_cell(space, "acceptance", 64, 0.01, 1.0, trials,
                                combine_seed(88007, 1));
    LabRow high = aggregate_cell(space, "acceptance", 64, 0.01, 30.0, trials,
                                 combine_seed(88007, 30));
    char buf[160];
    double ratio = high.det_dist_mean / low.det_dist_mean;
    std::snprintf(buf, sizeof(buf),
                  "retention@30=%.4f (band [0.05,0.25]); mean dist %.1f -> %.1f, ratio %.2f "
                  "(need >= 3)",
                  high.tp_rate_mean, low.det_dist_mean, high.det_dist_mean, ratio);
    bool retention_ok = high.tp_rate_mean >= 0.05 && high.tp_rate_mean <= 0.25;
    bool ratio_ok = ratio >= 3.0;
    return {retention_ok && ratio_ok, buf};
}

// ---------------------------------------------------------------- criterion 8

Outcome simulator_oracle() {
    Trace trace = load_trace(kDataDir / "hand_trace.csv");
    SimConfig config;
    config.capacity = 2;
    config.rti_s = 0.0;
    config.idle_timeout_s = std::numeric_limits<double>::infinity();
    config.report_period_s = 1.0;

    auto sequence = [&](Policy policy) {
        config.policy = policy;
        SimResult r = run_simulation(trace, config);
        std::string seq;
        for (const auto& iv : r.stats.series) {
            for (std::uint64_t i = 0; i < iv.hits; ++i) seq += 'H';
            for (std::uint64_t i = 0; i < iv.misses; ++i) seq += 'M';
        }
        return seq;
    };

    std::string lru = sequence(Policy::LRU);
    std::string lfu = sequence(Policy::LFU);
    std::string opt = sequence(Policy::OPTIMAL);
    bool ok = lru == "MMMMHH" && lfu == "MMMMHH" && opt == "MMMHHH";
    return {ok, "LRU=" + lru + " LFU=" + lfu + " OPT=" + opt +
                    " (hand enumeration: MMMMHH / MMMMHH / MMMHHH)"};
}

// ---------------------------------------------------------------- criterion 9

Outcome belady_property() {
    int traces = 100;
    for (int i = 1; i <= traces; ++i) {
        SyntheticSpec spec;
        spec.n_flows = 200;
        spec.n_packets = 10000;
        spec.duration_s = 600.0;
        spec.zipf_s = 0.9;
        spec.locality = 0.5;
        spec.seed = static_cast<std::uint64_t>(88009 + i);
        Trace trace = generate_synthetic(spec);

        SimConfig config;
        config.capacity = 16;
        config.rti_s = 0.0;
        config.idle_timeout_s = std::numeric_limits<double>::infinity();

        config.policy = Policy::OPTIMAL;
        std::uint64_t opt = run_simulation(trace, config).stats.misses;
        config.policy = Policy::LRU;
        std::uint64_t lru = run_simulation(trace, config).stats.misses;
        config.policy = Policy::LFU;
        std::uint64_t lfu = run_simulation(trace, config).stats.misses;
        if (opt > lru || opt > lfu)
            return {false, "trace " + std::to_string(i) + ": OPT=" + std::to_string(opt) +
                               " LRU=" + std::to_string(lru) + " LFU=" + std::to_string(lfu)};
    }
    return {true, "OPT <= LRU and OPT <= LFU on all 100 traces"};
}

// --------------------------------------------------------------- criterion 10

Outcome gradient_check() {
    // reduced-width versions of every hidden-layer shape in the parameter
    // grid: depth preserved, widths shrunk
    const std::vector<std::vector<int>> shapes = {
        {8, 8, 8, 8, 8},  // 32 x 5
        {8, 8, 8, 8},     // 64 x 4
        {8, 8, 8},        // 128 x 3
        {10, 10},         // 256 x 2
        {12, 12},         // 512 x 2
    };
    double worst_overall = 0.0;
    for (std::size_t s = 0; s < shapes.size(); ++s) {
        std::vector<int> sizes;
        sizes.push_back(6);
        sizes.insert(sizes.end(), shapes[s].begin(), shapes[s].end());
        sizes.push_back(kActionCount);
        QNetwork net(sizes, combine_seed(88010, s));

        RandomStream rng(combine_seed(88110, s));
        std::vector<Transition> batch;
        std::vector<double> targets;
        for (int i = 0; i < 6; ++i) {
            Transition t;
            for (int d = 0; d < 6; ++d) t.state.push_back(rng.next_unit() * 2.0 - 1.0);
            t.action = static_cast<int>(rng.next_below(kActionCount));
            t.reward = 1;
            t.next_state = t.state;
            t.terminal = true;
            batch.push_back(std::move(t));
            targets.push_back(rng.next_unit() * 2.0 - 1.0);
        }

        Gradients grads = batch_gradients(net, batch, targets);
        const double h = 1e-5;
        std::size_t flat = 0;
        double worst = 0.0;
        for (std::size_t l = 0; l < net.layer_count(); ++l) {
            auto scan = [&](const std::vector<double>& g) {
                for (double analytic : g) {
                    double orig = net.get_parameter(flat);
                    net.set_parameter(flat, orig + h);
                    double up = batch_loss(net, batch, targets);
                    net.set_parameter(flat, orig - h);
                    double down = batch_loss(net, batch, targets);
                    net.set_parameter(flat, orig);
                    double numeric = (up - down) / (2.0 * h);
                    double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
                    worst = std::max(worst, std::abs(analytic - numeric) / denom);
                    ++flat;
                }
            };
            scan(grads.weights[l]);
            scan(grads.biases[l]);
        }
        worst_overall = std::max(worst_overall, worst);
        if (worst > 1e-4)
            return {false, "shape " + std::to_string(s) + ": max rel err " +
                               std::to_string(worst)};
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max relative error %.2e across 5 shapes", worst_overall);
    return {true, buf};
}

// --------------------------------------------------------------- criterion 11

Outcome bandit_sanity() {
    std::string detail;
    for (std::uint64_t seed : {101ull, 103ull, 107ull}) {
        AgentConfig config;
        config.input_dim = 4;
        config.hidden_layers = {32, 32};
        config.learning_rate = 0.001;
        config.gamma = 0.99;
        config.batch_size = 32;
        config.warmup = 64;
        config.buffer_capacity = 4000;
        config.epsilon_decay_steps = 1000;
        config.seed = seed;
        DqnAgent agent(config);

        RandomStream env(combine_seed(88011, seed));
        auto draw_state = [&]() {
            std::vector<double> s(4);
            for (auto& v : s) v = env.next_unit();
            return s;
        };

        std::vector<double> state = draw_state();
        for (int step = 0; step < 5000; ++step) {
            int action = agent.select_action(state, true);
            int reward = action == 0 ? 1 : -1;
            std::vector<double> next = draw_state();
            agent.observe({state, action, reward, next, true});
            agent.maybe_train();
            state = std::move(next);
        }

        int zero = 0;
        const int evals = 1000;
        for (int i = 0; i < evals; ++i)
            if (agent.select_action(draw_state(), false) == 0) ++zero;
        double frac = static_cast<double>(zero) / evals;
        char buf[48];
        std::snprintf(buf, sizeof(buf), "seed %llu: %.1f%%; ",
                      static_cast<unsigned long long>(seed), 100.0 * frac);
        detail += buf;
        if (frac < 0.95) return {false, detail + "below 95%"};
    }
    return {true, detail + "rewarded action dominates"};
}

// --------------------------------------------------------------- criterion 12

Outcome action_zero_equivalence() {
    auto compare_logs = [](const Trace& trace, SimConfig sim,
                           const std::string& label) -> Outcome {
        sim.policy = Policy::LRU;
        SimResult plain = run_simulation(trace, sim, nullptr, {.record_events = true});

        sim.policy = Policy::DQN_LRU;
        AgentConfig agent_cfg;
        agent_cfg.input_dim = state_dim(sim.capacity, 0.01);
        agent_cfg.hidden_layers = {16};
        agent_cfg.seed = sim.seed;
        agent_cfg.warmup = 64;
        agent_cfg.batch_size = 16;
        DqnAgent agent(agent_cfg);
        DqnHookConfig hook_cfg;
        hook_cfg.capacity = sim.capacity;
        hook_cfg.bloom_fp = 0.01;
        hook_cfg.idle_timeout_s = sim.idle_timeout_s;
        hook_cfg.mode = EvictionMode::LRU;
        hook_cfg.run_seed = sim.seed;
        hook_cfg.force_action = 0;
        DqnEvictionHook hook(agent, hook_cfg);
        SimResult forced = run_simulation(trace, sim, &hook, {.record_events = true});

        if (forced.stats.dqn_evictions != 0)
            return {false, label + ": forced action 0 still evicted"};
        if (plain.events != forced.events)
            return {false, label + ": event logs diverge (" +
                               std::to_string(plain.events.size()) + " vs " +
                               std::to_string(forced.events.size()) + " events)"};
        if (plain.stats.hits != forced.stats.hits ||
            plain.stats.misses != forced.stats.misses)
            return {false, label + ": hit/miss totals diverge"};
        return {true, label + ": " + std::to_string(plain.events.size()) +
                          " events identical"};
    };

    SimConfig hand;
    hand.capacity = 2;
    hand.rti_s = 0.1;
    hand.eti_multiple = 5;
    hand.idle_timeout_s = 30.0;
    hand.seed = 101;
    Outcome a = compare_logs(load_trace(kDataDir / "hand_trace.csv"), hand, "hand trace");
    if (!a.pass) return a;

    SyntheticSpec spec;
    spec.n_flows = 200;
    spec.n_packets = 5000;
    spec.duration_s = 60.0;
    spec.zipf_s = 0.9;
    spec.locality = 0.7;
    spec.seed = 88012;
    SimConfig synth;
    synth.capacity = 16;
    synth.rti_s = 0.01;
    synth.eti_multiple = 10;
    synth.idle_timeout_s = 30.0;
    synth.seed = 103;
    Outcome b = compare_logs(generate_synthetic(spec), synth, "synthetic");
    if (!b.pass) return b;
    return {true, a.detail + "; " + b.detail};
}

// --------------------------------------------------------------- criterion 13

Outcome desk_scale_benefit() {
    AppConfig base;
    base.apply(AppConfig::preset("dqn_lru_best"));
    base.apply({{"synth_flows", "600"},
                {"synth_packets", "300000"},
                {"synth_duration_s", "1800"},
                {"synth_locality", "0.9"},
                {"synth_zipf", "1.0"},
                {"synth_seed", "1301"}});
    Trace trace = resolve_trace(base);
    std::string trace_id = trace_identifier(base);

    AppConfig lru_cfg = base;
    lru_cfg.policies = {"LRU"};
    double lru_miss = run_sim_cell(lru_cfg, trace, trace_id).summary.miss_rate;

    AppConfig opt_cfg = base;
    opt_cfg.policies = {"OPTIMAL"};
    double opt_miss = run_sim_cell(opt_cfg, trace, trace_id).summary.miss_rate;

    auto nm_lru = normalized_miss_rate(lru_miss, opt_miss);
    if (!nm_lru) return {false, "optimal miss rate is zero"};

    std::string detail;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "LRU nm=%.4f; ", *nm_lru);
    detail += buf;

    int wins = 0;
    for (std::uint64_t seed : {101ull, 103ull, 107ull}) {
        AppConfig dqn_cfg = base;
        dqn_cfg.seeds = {seed};
        double dqn_miss = run_sim_cell(dqn_cfg, trace, trace_id).summary.miss_rate;
        double nm_dqn = *normalized_miss_rate(dqn_miss, opt_miss);
        std::snprintf(buf, sizeof(buf), "seed %llu nm=%.4f; ",
                      static_cast<unsigned long long>(seed), nm_dqn);
        detail += buf;
        if (nm_dqn <= *nm_lru) ++wins;
        if (nm_dqn > *nm_lru * 1.02)
            return {false, detail + "worse than LRU by more than 2% relative"};
    }
    std::snprintf(buf, sizeof(buf), "%d of 3 seeds at or below LRU (need >= 2)", wins);
    detail += buf;
    return {wins >= 2, detail};
}

// --------------------------------------------------------------- criterion 14

Outcome determinism() {
    fs::path root = fs::temp_directory_path() / "bf_acceptance_det";
    fs::remove_all(root);

    AppConfig sim_cfg;
    sim_cfg.apply({{"policy", "DQN_LRU"},
                   {"lr", "0.05"},
                   {"gamma", "0.99"},
                   {"layers", "32_32"},
                   {"capacity", "8"},
                   {"rti_s", "0.01"},
                   {"eti_multiple", "20"},
                   {"seed", "101"},
                   {"synth_flows", "150"},
                   {"synth_packets", "30000"},
                   {"synth_duration_s", "120"},
                   {"synth_seed", "77"}});
    sim_cfg.out_dir = (root / "sim_a").string();
    cmd_sim(sim_cfg);
    sim_cfg.out_dir = (root / "sim_b").string();
    cmd_sim(sim_cfg);
    for (const char* name : {"summary.json", "timeseries.csv", "decisions.csv"}) {
        if (slurp(root / "sim_a" / name) != slurp(root / "sim_b" / name))
            return {false, std::string("sim output differs: ") + name};
        if (slurp(root / "sim_a" / name).empty())
            return {false, std::string("sim output empty: ") + name};
    }

    AppConfig lab_cfg;
    lab_cfg.apply({{"window_sizes", "30, 110"},
                   {"fp_rates", "0.01, 0.3"},
                   {"flip_pcts", "5, 30"},
                   {"trials", "20"},
                   {"space_flows", "400"},
                   {"seed", "5"}});
    lab_cfg.out_dir = (root / "lab_a").string();
    cmd_lab(lab_cfg);
    lab_cfg.out_dir = (root / "lab_b").string();
    cmd_lab(lab_cfg);
    for (const char* name : {"experiment_a.csv", "experiment_b.csv", "experiment_c.csv",
                             "experiment_d.csv"}) {
        if (slurp(root / "lab_a" / name) != slurp(root / "lab_b" / name))
            return {false, std::string("lab output differs: ") + name};
    }
    return {true, "sim and lab reruns byte-identical"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };

    // criteria 5-7 share one flow space (1000 flows, as in the experiments)
    RandomStream space_rng(88000);
    SortedFlowSpace space(generate_flow_ids(1000, 0.5, space_rng));
    LocalityGrid grid;  // filled lazily by criterion 5, reused by 6

    std::vector<Criterion> criteria = {
        {1, "sizing formula", 1.0, sizing_formula},
        {2, "no false negatives", 5.0, no_false_negatives},
        {3, "FP calibration", 30.0, fp_calibration},
        {4, "perturbation exactness", 5.0, perturbation_exactness},
        {5, "TP retention trend", 120.0,
         [&]() {
             grid = run_locality_grid(space, 200);
             return tp_retention_trend(grid);
         }},
        {6, "detected-distance trend", 120.0, [&]() { return distance_trend(grid); }},
        {7, "design-point band", 300.0, [&]() { return design_point_band(space); }},
        {8, "simulator oracle", 1.0, simulator_oracle},
        {9, "Belady property", 120.0, belady_property},
        {10, "DQN gradient check", 60.0, gradient_check},
        {11, "DQN bandit sanity", 120.0, bandit_sanity},
        {12, "action-0 equivalence", 60.0, action_zero_equivalence},
        {13, "desk-scale learning benefit", 1800.0, desk_scale_benefit},
        {14, "determinism", 600.0, determinism},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_budget = elapsed < criterion.budget_s;
        bool pass = outcome.pass && in_budget;
        if (!pass) ++failures;
        std::printf("%s criterion %2d: %s (%.1fs%s) — %s\n", pass ? "PASS" : "FAIL",
                    criterion.id, criterion.name, elapsed,
                    in_budget ? "" : ", OVER BUDGET", outcome.detail.c_str());
        std::fflush(stdout);
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
