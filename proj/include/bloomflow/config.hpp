#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bloomflow {

/// Flat `key = value` text: one assignment per line, `#` comments,
/// comma-separated lists for sweep axes. Unknown keys are rejected at
/// validation time.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

struct AppConfig {
    // run targets
    std::string trace = "synthetic";  // CSV path or "synthetic"
    std::string out_dir = "out";
    int jobs = 0;  // 0 -> hardware concurrency

    // sweepable axes (single-valued for `sim`)
    std::vector<std::string> policies = {"LRU"};
    std::vector<std::uint64_t> seeds = {101};
    std::vector<int> capacities = {32};
    std::vector<double> rti_values = {0.01};
    std::vector<int> eti_multiples = {100};
    std::vector<double> learning_rates;        // required for DQN policies
    std::vector<double> gammas;                // required for DQN policies
    std::vector<std::vector<int>> layer_specs; // required for DQN policies

    // fixed simulator settings
    double idle_timeout_s = 30.0;
    double tick_s = 0.0;  // 0 -> rti/10
    double report_period_s = 60.0;
    double bloom_fp = 0.01;

    // agent settings
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    std::uint64_t epsilon_decay_steps = 0;  // 0 -> 20% of expected ETI decisions
    std::size_t buffer_capacity = 10000;
    std::size_t batch_size = 64;
    std::uint64_t target_sync = 500;
    std::size_t warmup = 256;
    std::optional<int> force_action;

    // synthetic trace
    std::uint32_t synth_flows = 600;
    std::uint64_t synth_packets = 300000;
    double synth_duration_s = 1800.0;
    double synth_locality = 0.9;
    double synth_zipf = 1.0;
    std::uint64_t synth_seed = 7;

    // locality lab
    std::vector<int> window_sizes;     // empty -> 30..290 step 20
    std::vector<double> fp_rates;      // empty -> {0.01, 0.05, 0.1, 0.3}
    std::vector<double> flip_pcts;     // empty -> 5..30 step 5
    int trials = 200;
    std::uint32_t space_flows = 1000;
    double space_locality = 0.5;

    /// Apply assignments on top of current values; throws on unknown keys
    /// or unparsable values.
    void apply(const std::map<std::string, std::string>& kv);

    /// Named parameter bundles from the evaluation's best-found setups.
    static std::map<std::string, std::string> preset(const std::string& name);

    void validate_for_sim() const;    // single-valued axes, agent config present
    void validate_for_sweep() const;
    void validate_for_lab() const;

    /// Resolved cell parameters for one (policy, seed, capacity, ...) cell,
    /// echoed into run artifacts.
    std::map<std::string, std::string> echo_cell(const std::string& policy,
                                                 std::uint64_t seed, int capacity,
                                                 double rti_s, int eti_multiple,
                                                 double lr, double gamma,
                                                 const std::vector<int>& layers) const;
};

std::vector<int> parse_layer_spec(const std::string& spec);  // "128_128_128"
std::string layer_spec_name(const std::vector<int>& layers);

}  // namespace bloomflow
