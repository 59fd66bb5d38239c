#include "bloomflow/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "bloomflow/locality_lab.hpp"

namespace bloomflow {

namespace fs = std::filesystem;

namespace {

LabConfig lab_config_from(const AppConfig& config) {
    LabConfig lab = LabConfig::defaults();
    if (!config.window_sizes.empty()) lab.window_sizes = config.window_sizes;
    if (!config.fp_rates.empty()) lab.fp_rates = config.fp_rates;
    if (!config.flip_pcts.empty()) lab.flip_pcts = config.flip_pcts;
    lab.trials = config.trials;
    lab.rng_seed = config.seeds.front();
    lab.space_flows = config.space_flows;
    lab.space_locality = config.space_locality;
    return lab;
}

}  // namespace

void cmd_lab(const AppConfig& config) {
    config.validate_for_lab();
    LabConfig lab = lab_config_from(config);
    lab.validate();

    fs::create_directories(config.out_dir);
    RandomStream rng(combine_seed(lab.rng_seed, 0x5bace));
    SortedFlowSpace space(generate_flow_ids(lab.space_flows, lab.space_locality, rng));

    constexpr std::uint64_t kSizeItems = 55;  // the window-110 insertion count
    write_size_csv(fs::path(config.out_dir) / "experiment_a.csv",
                   experiment_a_size_vs_fp(kSizeItems, lab.fp_rates), kSizeItems);
    write_lab_csv(fs::path(config.out_dir) / "experiment_b.csv",
                  experiment_b_tp_vs_flip(lab, space));
    write_lab_csv(fs::path(config.out_dir) / "experiment_c.csv",
                  experiment_c_distance_vs_flip(lab, space));
    write_lab_csv(fs::path(config.out_dir) / "experiment_d.csv",
                  experiment_d_design_choice(lab, space));
}

Trace resolve_trace(const AppConfig& config) {
    if (config.trace == "synthetic") {
        SyntheticSpec spec;
        spec.n_flows = config.synth_flows;
        spec.n_packets = config.synth_packets;
        spec.duration_s = config.synth_duration_s;
        spec.locality = config.synth_locality;
        spec.zipf_s = config.synth_zipf;
        spec.seed = config.synth_seed;
        return generate_synthetic(spec);
    }
    return load_trace(config.trace);
}

std::string trace_identifier(const AppConfig& config) {
    if (config.trace == "synthetic") {
        return "synthetic-f" + std::to_string(config.synth_flows) + "-p" +
               std::to_string(config.synth_packets) + "-s" +
               std::to_string(config.synth_seed);
    }
    return fs::path(config.trace).filename().string();
}

SimRun run_sim_cell(const AppConfig& config, const Trace& trace,
                    const std::string& trace_id, bool record_events) {
    config.validate_for_sim();

    const std::string& policy_str = config.policies.front();
    Policy policy = parse_policy(policy_str);

    SimConfig sim;
    sim.policy = policy;
    sim.rti_s = config.rti_values.front();
    sim.idle_timeout_s = config.idle_timeout_s;
    sim.eti_multiple = config.eti_multiples.front();
    sim.capacity = config.capacities.front();
    sim.tick_s = config.tick_s;
    sim.seed = config.seeds.front();
    sim.report_period_s = config.report_period_s;

    double lr = 0.0, gamma = 0.0;
    std::vector<int> layers;
    SimRun run;
    SimOptions options{record_events};

    if (is_dqn_policy(policy)) {
        lr = config.learning_rates.front();
        gamma = config.gammas.front();
        layers = config.layer_specs.front();

        AgentConfig agent_cfg;
        agent_cfg.input_dim = state_dim(sim.capacity, config.bloom_fp);
        agent_cfg.hidden_layers = layers;
        agent_cfg.learning_rate = lr;
        agent_cfg.gamma = gamma;
        agent_cfg.epsilon_start = config.epsilon_start;
        agent_cfg.epsilon_end = config.epsilon_end;
        agent_cfg.buffer_capacity = config.buffer_capacity;
        agent_cfg.batch_size = config.batch_size;
        agent_cfg.target_sync_period = config.target_sync;
        agent_cfg.warmup = config.warmup;
        agent_cfg.seed = sim.seed;
        if (config.epsilon_decay_steps > 0) {
            agent_cfg.epsilon_decay_steps = config.epsilon_decay_steps;
        } else {
            // Decay over the first 20% of expected ETI decisions.
            double duration = trace.packets.empty() ? 0.0 : trace.packets.back().timestamp;
            double eti_s = sim.rti_s * sim.eti_multiple;
            auto expected = static_cast<std::uint64_t>(duration / eti_s);
            agent_cfg.epsilon_decay_steps = std::max<std::uint64_t>(1, expected / 5);
        }

        DqnAgent agent(agent_cfg);
        DqnHookConfig hook_cfg;
        hook_cfg.capacity = sim.capacity;
        hook_cfg.bloom_fp = config.bloom_fp;
        hook_cfg.idle_timeout_s = sim.idle_timeout_s;
        hook_cfg.mode = policy == Policy::DQN_LFU ? EvictionMode::LFU : EvictionMode::LRU;
        hook_cfg.run_seed = sim.seed;
        hook_cfg.force_action = config.force_action;
        DqnEvictionHook hook(agent, hook_cfg);

        SimResult result = run_simulation(trace, sim, &hook, options);
        run.stats = std::move(result.stats);
        run.events = std::move(result.events);
        run.decisions = hook.decisions();
    } else {
        SimResult result = run_simulation(trace, sim, nullptr, options);
        run.stats = std::move(result.stats);
        run.events = std::move(result.events);
    }

    run.summary = make_summary(
        run.stats, policy_str, trace_id, sim.seed, sim.report_period_s,
        config.echo_cell(policy_str, sim.seed, sim.capacity, sim.rti_s, sim.eti_multiple,
                         lr, gamma, layers));
    return run;
}

namespace {

void write_decisions_csv(const fs::path& path, const std::vector<DecisionRecord>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "time_s,action,absent_count,evicted_flow,reward\n";
    char buf[40];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.time);
        out << buf << ',' << r.action << ',' << r.absent_count << ',';
        if (r.evicted) {
            FlowId flow{static_cast<std::uint32_t>(*r.evicted >> 32),
                        static_cast<std::uint32_t>(*r.evicted & 0xFFFFFFFFull)};
            out << flow.str();
        } else {
            out << "none";
        }
        out << ',';
        if (r.reward) out << *r.reward;
        out << '\n';
    }
}

void write_run_artifacts(const fs::path& dir, const SimRun& run) {
    fs::create_directories(dir);
    write_summary_json(dir / "summary.json", run.summary);
    write_timeseries_csv(dir / "timeseries.csv", run.stats);
    if (run.summary.policy == "DQN_LRU" || run.summary.policy == "DQN_LFU")
        write_decisions_csv(dir / "decisions.csv", run.decisions);
}

}  // namespace

RunSummary cmd_sim(const AppConfig& config) {
    Trace trace = resolve_trace(config);
    SimRun run = run_sim_cell(config, trace, trace_identifier(config));
    write_run_artifacts(config.out_dir, run);
    return run.summary;
}

namespace {

struct SweepCell {
    std::size_t index;
    std::string policy;
    std::uint64_t seed;
    int capacity;
    double rti_s;
    int eti_multiple;
    double lr;
    double gamma;
    std::vector<int> layers;

    std::string id() const {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "cell%04zu", index);
        std::string out = buf;
        out += "-" + policy + "-s" + std::to_string(seed) + "-c" + std::to_string(capacity);
        if (policy == "DQN_LRU" || policy == "DQN_LFU")
            out += "-" + layer_spec_name(layers);
        return out;
    }
};

std::vector<SweepCell> expand_cells(const AppConfig& config) {
    std::vector<SweepCell> cells;
    std::size_t index = 0;
    for (const auto& policy : config.policies) {
        bool dqn = policy == "DQN_LRU" || policy == "DQN_LFU";
        // Non-DQN policies ignore the agent axes; collapse them to one cell.
        std::vector<double> lrs = dqn ? config.learning_rates : std::vector<double>{0.0};
        std::vector<double> gms = dqn ? config.gammas : std::vector<double>{0.0};
        std::vector<std::vector<int>> lys =
            dqn ? config.layer_specs : std::vector<std::vector<int>>{{}};
        for (std::uint64_t seed : config.seeds)
            for (int capacity : config.capacities)
                for (double rti : config.rti_values)
                    for (int eti : config.eti_multiples)
                        for (double lr : lrs)
                            for (double gamma : gms)
                                for (const auto& layers : lys)
                                    cells.push_back({index++, policy, seed, capacity, rti,
                                                     eti, lr, gamma, layers});
    }
    return cells;
}

AppConfig cell_config(const AppConfig& base, const SweepCell& cell) {
    AppConfig c = base;
    c.policies = {cell.policy};
    c.seeds = {cell.seed};
    c.capacities = {cell.capacity};
    c.rti_values = {cell.rti_s};
    c.eti_multiples = {cell.eti_multiple};
    if (cell.policy == "DQN_LRU" || cell.policy == "DQN_LFU") {
        c.learning_rates = {cell.lr};
        c.gammas = {cell.gamma};
        c.layer_specs = {cell.layers};
    }
    return c;
}

}  // namespace

int cmd_sweep(const AppConfig& config) {
    config.validate_for_sweep();
    std::vector<SweepCell> cells = expand_cells(config);

    fs::path root(config.out_dir);
    fs::create_directories(root / "cells");

    Trace trace = resolve_trace(config);
    std::string trace_id = trace_identifier(config);

    unsigned jobs = config.jobs > 0 ? static_cast<unsigned>(config.jobs)
                                    : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, cells.size());

    std::vector<std::string> status(cells.size(), "pending");
    std::mutex log_mutex;
    std::atomic<std::size_t> next{0};
    std::atomic<int> failures{0};

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const SweepCell& cell = cells[i];
            fs::path dir = root / "cells" / cell.id();
            if (fs::exists(dir / "summary.json")) {
                try {
                    read_summary_json(dir / "summary.json");
                    status[i] = "skipped";
                    continue;  // completed by a previous sweep
                } catch (...) {
                    // corrupt artifact: redo the cell
                }
            }
            try {
                SimRun run = run_sim_cell(cell_config(config, cell), trace, trace_id);
                write_run_artifacts(dir, run);
                status[i] = "done";
            } catch (const std::exception& e) {
                status[i] = "failed";
                ++failures;
                std::lock_guard<std::mutex> lock(log_mutex);
                std::cerr << cell.id() << ": " << e.what() << '\n';
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::ofstream manifest(root / "manifest.tsv", std::ios::binary);
    manifest << "cell\tpolicy\tseed\tcapacity\trti_s\teti_multiple\tstatus\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        manifest << c.id() << '\t' << c.policy << '\t' << c.seed << '\t' << c.capacity
                 << '\t' << c.rti_s << '\t' << c.eti_multiple << '\t' << status[i] << '\n';
    }
    return failures.load();
}

int cmd_report(const fs::path& input_dir, const fs::path& out_path) {
    if (!fs::exists(input_dir)) throw std::runtime_error("no such directory: " +
                                                          input_dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(input_dir)) {
        if (entry.is_regular_file() && entry.path().filename() == "summary.json")
            files.push_back(entry.path());
    }
    if (files.empty()) throw std::runtime_error("no summary.json files under " +
                                                 input_dir.string());
    std::sort(files.begin(), files.end());

    std::vector<RunSummary> runs;
    int corrupt = 0;
    for (const auto& file : files) {
        try {
            runs.push_back(read_summary_json(file));
        } catch (const std::exception& e) {
            ++corrupt;
            std::cerr << "skipping " << file.string() << ": " << e.what() << '\n';
        }
    }
    if (runs.empty()) throw std::runtime_error("all summaries corrupt");

    std::vector<AggregateRow> rows = aggregate(runs, {"policy", "trace"});
    write_aggregate_csv(out_path, rows);
    return corrupt;
}

}  // namespace bloomflow
