#include "bloomflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bloomflow {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> parts;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

double parse_double(const std::string& key, const std::string& value) {
    if (value == "inf" || value == "infinity")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: bad number for " + key + ": '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: bad integer for " + key + ": '" + value + "'");
    }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& part : split_list(value)) out.push_back(parse_double(key, part));
    if (out.empty()) throw std::invalid_argument("config: empty list for " + key);
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    for (const auto& part : split_list(value))
        out.push_back(static_cast<int>(parse_int(key, part)));
    if (out.empty()) throw std::invalid_argument("config: empty list for " + key);
    return out;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": empty key");
        kv[key] = value;
    }
    return kv;
}

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::vector<int> parse_layer_spec(const std::string& spec) {
    std::vector<int> layers;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, '_')) {
        if (item.empty()) throw std::invalid_argument("bad layer spec: " + spec);
        layers.push_back(static_cast<int>(parse_int("layers", item)));
        if (layers.back() < 1) throw std::invalid_argument("bad layer spec: " + spec);
    }
    if (layers.empty()) throw std::invalid_argument("bad layer spec: " + spec);
    return layers;
}

std::string layer_spec_name(const std::vector<int>& layers) {
    std::string out;
    for (int s : layers) {
        if (!out.empty()) out += '_';
        out += std::to_string(s);
    }
    return out;
}

void AppConfig::apply(const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "trace") {
            trace = value;
        } else if (key == "out_dir") {
            out_dir = value;
        } else if (key == "jobs") {
            jobs = static_cast<int>(parse_int(key, value));
        } else if (key == "policy") {
            policies = split_list(value);
            if (policies.empty()) throw std::invalid_argument("config: empty policy list");
        } else if (key == "seed" || key == "seeds") {
            seeds.clear();
            for (const auto& part : split_list(value))
                seeds.push_back(static_cast<std::uint64_t>(parse_int(key, part)));
            if (seeds.empty()) throw std::invalid_argument("config: empty seed list");
        } else if (key == "capacity") {
            capacities = parse_int_list(key, value);
        } else if (key == "rti_s") {
            rti_values = parse_double_list(key, value);
        } else if (key == "eti_multiple") {
            eti_multiples = parse_int_list(key, value);
        } else if (key == "lr") {
            learning_rates = parse_double_list(key, value);
        } else if (key == "gamma") {
            gammas = parse_double_list(key, value);
        } else if (key == "layers") {
            layer_specs.clear();
            for (const auto& part : split_list(value))
                layer_specs.push_back(parse_layer_spec(part));
        } else if (key == "idle_timeout_s") {
            idle_timeout_s = parse_double(key, value);
        } else if (key == "tick_s") {
            tick_s = parse_double(key, value);
        } else if (key == "report_period_s") {
            report_period_s = parse_double(key, value);
        } else if (key == "bloom_fp") {
            bloom_fp = parse_double(key, value);
        } else if (key == "epsilon_start") {
            epsilon_start = parse_double(key, value);
        } else if (key == "epsilon_end") {
            epsilon_end = parse_double(key, value);
        } else if (key == "epsilon_decay_steps") {
            epsilon_decay_steps = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "buffer_capacity") {
            buffer_capacity = static_cast<std::size_t>(parse_int(key, value));
        } else if (key == "batch_size") {
            batch_size = static_cast<std::size_t>(parse_int(key, value));
        } else if (key == "target_sync") {
            target_sync = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "warmup") {
            warmup = static_cast<std::size_t>(parse_int(key, value));
        } else if (key == "force_action") {
            force_action = static_cast<int>(parse_int(key, value));
        } else if (key == "synth_flows") {
            synth_flows = static_cast<std::uint32_t>(parse_int(key, value));
        } else if (key == "synth_packets") {
            synth_packets = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "synth_duration_s") {
            synth_duration_s = parse_double(key, value);
        } else if (key == "synth_locality") {
            synth_locality = parse_double(key, value);
        } else if (key == "synth_zipf") {
            synth_zipf = parse_double(key, value);
        } else if (key == "synth_seed") {
            synth_seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "window_sizes") {
            window_sizes = parse_int_list(key, value);
        } else if (key == "fp_rates") {
            fp_rates = parse_double_list(key, value);
        } else if (key == "flip_pcts") {
            flip_pcts = parse_double_list(key, value);
        } else if (key == "trials") {
            trials = static_cast<int>(parse_int(key, value));
        } else if (key == "space_flows") {
            space_flows = static_cast<std::uint32_t>(parse_int(key, value));
        } else if (key == "space_locality") {
            space_locality = parse_double(key, value);
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
}

std::map<std::string, std::string> AppConfig::preset(const std::string& name) {
    if (name == "dqn_lfu_best") {
        return {{"policy", "DQN_LFU"}, {"capacity", "16"},   {"rti_s", "0.01"},
                {"idle_timeout_s", "30.0"}, {"eti_multiple", "5"}, {"lr", "0.001"},
                {"gamma", "0.99"},     {"layers", "128_128_128"}};
    }
    if (name == "dqn_lru_best") {
        return {{"policy", "DQN_LRU"}, {"capacity", "32"},   {"rti_s", "0.01"},
                {"idle_timeout_s", "30.0"}, {"eti_multiple", "100"}, {"lr", "0.1"},
                {"gamma", "0.99"},     {"layers", "512_512"}};
    }
    throw std::invalid_argument("unknown preset: " + name);
}

namespace {

bool any_dqn(const std::vector<std::string>& policies) {
    return std::any_of(policies.begin(), policies.end(), [](const std::string& p) {
        return p == "DQN_LRU" || p == "DQN_LFU";
    });
}

}  // namespace

void AppConfig::validate_for_sweep() const {
    if (policies.empty() || seeds.empty() || capacities.empty() || rti_values.empty() ||
        eti_multiples.empty())
        throw std::invalid_argument("config: empty sweep axis");
    if (any_dqn(policies)) {
        if (learning_rates.empty() || gammas.empty() || layer_specs.empty())
            throw std::invalid_argument(
                "config: DQN policies need lr, gamma and layers set");
        if (force_action && (*force_action < 0 || *force_action > 30))
            throw std::invalid_argument("config: force_action must be in [0, 30]");
    }
    if (!(bloom_fp > 0.0) || !(bloom_fp < 1.0))
        throw std::invalid_argument("config: bloom_fp must be in (0, 1)");
}

void AppConfig::validate_for_sim() const {
    validate_for_sweep();
    auto single = [](std::size_t n, const char* what) {
        if (n != 1)
            throw std::invalid_argument(std::string("sim: expected a single value for ") +
                                        what);
    };
    single(policies.size(), "policy");
    single(seeds.size(), "seed");
    single(capacities.size(), "capacity");
    single(rti_values.size(), "rti_s");
    single(eti_multiples.size(), "eti_multiple");
    if (any_dqn(policies)) {
        single(learning_rates.size(), "lr");
        single(gammas.size(), "gamma");
        single(layer_specs.size(), "layers");
    }
}

void AppConfig::validate_for_lab() const {
    if (trials < 1) throw std::invalid_argument("lab: trials must be >= 1");
    if (space_flows < 2) throw std::invalid_argument("lab: space_flows must be >= 2");
    // empty lists fall back to the defaults; explicit empties never parse
}

std::map<std::string, std::string> AppConfig::echo_cell(
    const std::string& policy, std::uint64_t seed, int capacity, double rti_s,
    int eti_multiple, double lr, double gamma, const std::vector<int>& layers) const {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::map<std::string, std::string> echo;
    echo["policy"] = policy;
    echo["seed"] = std::to_string(seed);
    echo["capacity"] = std::to_string(capacity);
    echo["rti_s"] = num(rti_s);
    echo["eti_multiple"] = std::to_string(eti_multiple);
    echo["idle_timeout_s"] = num(idle_timeout_s);
    echo["tick_s"] = num(tick_s);
    echo["report_period_s"] = num(report_period_s);
    echo["trace"] = trace;
    if (trace == "synthetic") {
        echo["synth_flows"] = std::to_string(synth_flows);
        echo["synth_packets"] = std::to_string(synth_packets);
        echo["synth_duration_s"] = num(synth_duration_s);
        echo["synth_locality"] = num(synth_locality);
        echo["synth_zipf"] = num(synth_zipf);
        echo["synth_seed"] = std::to_string(synth_seed);
    }
    if (policy == "DQN_LRU" || policy == "DQN_LFU") {
        echo["lr"] = num(lr);
        echo["gamma"] = num(gamma);
        echo["layers"] = layer_spec_name(layers);
        echo["bloom_fp"] = num(bloom_fp);
        echo["epsilon_start"] = num(epsilon_start);
        echo["epsilon_end"] = num(epsilon_end);
        echo["epsilon_decay_steps"] = std::to_string(epsilon_decay_steps);
        echo["buffer_capacity"] = std::to_string(buffer_capacity);
        echo["batch_size"] = std::to_string(batch_size);
        echo["target_sync"] = std::to_string(target_sync);
        echo["warmup"] = std::to_string(warmup);
        if (force_action) echo["force_action"] = std::to_string(*force_action);
    }
    return echo;
}

}  // namespace bloomflow
