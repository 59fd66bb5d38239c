#include <CLI11.hpp>

#include <iostream>

#include "bloomflow/commands.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string preset;
    std::string trace;
    std::string policy;
    std::string seed;
    std::string out;
    int jobs = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "key = value config file")
        ->envname("BLOOMFLOW_CONFIG");
    cmd->add_option("--preset", flags.preset,
                    "named parameter bundle (dqn_lfu_best, dqn_lru_best)")
        ->envname("BLOOMFLOW_PRESET");
    cmd->add_option("--trace", flags.trace, "trace CSV path (or 'synthetic')")
        ->envname("BLOOMFLOW_TRACE");
    cmd->add_option("--policy", flags.policy,
                    "LRU, LFU, OPTIMAL, DQN_LRU or DQN_LFU (comma list for sweep)")
        ->envname("BLOOMFLOW_POLICY");
    cmd->add_option("--seed", flags.seed, "RNG seed (comma list for sweep)")
        ->envname("BLOOMFLOW_SEED");
    cmd->add_option("--out", flags.out, "output directory")->envname("BLOOMFLOW_OUT");
    cmd->add_option("--jobs", flags.jobs, "parallel sweep workers (0 = all cores)")
        ->envname("BLOOMFLOW_JOBS");
}

bloomflow::AppConfig resolve(const CommonFlags& flags) {
    bloomflow::AppConfig config;
    // precedence: preset < config file < flags
    if (!flags.preset.empty()) config.apply(bloomflow::AppConfig::preset(flags.preset));
    if (!flags.config_path.empty())
        config.apply(bloomflow::parse_config_file(flags.config_path));
    std::map<std::string, std::string> overrides;
    if (!flags.trace.empty()) overrides["trace"] = flags.trace;
    if (!flags.policy.empty()) overrides["policy"] = flags.policy;
    if (!flags.seed.empty()) overrides["seed"] = flags.seed;
    if (!flags.out.empty()) overrides["out_dir"] = flags.out;
    if (flags.jobs >= 0) overrides["jobs"] = std::to_string(flags.jobs);
    config.apply(overrides);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bloom-filter flow-space encoding and SFT eviction simulator"};
    app.require_subcommand(1);

    CommonFlags lab_flags, sim_flags, sweep_flags;
    std::string report_dir, report_out = "report.csv";

    CLI::App* lab = app.add_subcommand("lab", "run the four locality experiments");
    add_common(lab, lab_flags);
    CLI::App* sim = app.add_subcommand("sim", "run one simulation cell");
    add_common(sim, sim_flags);
    CLI::App* sweep = app.add_subcommand("sweep", "run the configured parameter grid");
    add_common(sweep, sweep_flags);
    CLI::App* report = app.add_subcommand("report", "aggregate run summaries");
    report->add_option("--in", report_dir, "directory of run outputs")->required();
    report->add_option("--out", report_out, "comparison table CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (lab->parsed()) {
            bloomflow::cmd_lab(resolve(lab_flags));
            return 0;
        }
        if (sim->parsed()) {
            bloomflow::RunSummary summary = bloomflow::cmd_sim(resolve(sim_flags));
            std::cout << summary.policy << " on " << summary.trace_id << ": " << summary.packets
                      << " packets, hit rate " << summary.hit_rate << ", miss rate "
                      << summary.miss_rate << '\n';
            return 0;
        }
        if (sweep->parsed()) {
            int failures = bloomflow::cmd_sweep(resolve(sweep_flags));
            if (failures) std::cerr << failures << " cell(s) failed\n";
            return failures ? 1 : 0;
        }
        if (report->parsed()) {
            int corrupt = bloomflow::cmd_report(report_dir, report_out);
            if (corrupt) std::cerr << corrupt << " summary file(s) skipped\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
