#include "bloomflow/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "bloomflow/stats.hpp"

namespace bloomflow {

std::optional<double> normalized_miss_rate(double m_strategy, double m_optimal) {
    if (m_optimal == 0.0) return std::nullopt;
    return (m_strategy - m_optimal) / m_optimal;
}

double hit_rate_delta(std::span<const double> series_a, std::span<const double> series_b,
                      std::size_t window) {
    if (series_a.size() != series_b.size())
        throw std::invalid_argument("hit_rate_delta: series length mismatch");
    if (window == 0 || window > series_a.size())
        throw std::invalid_argument("hit_rate_delta: bad window");
    double acc = 0.0;
    for (std::size_t i = series_a.size() - window; i < series_a.size(); ++i)
        acc += series_a[i] - series_b[i];
    return acc / static_cast<double>(window);
}

std::vector<AggregateRow> aggregate(const std::vector<RunSummary>& runs,
                                    const std::vector<std::string>& group_by) {
    auto field = [](const RunSummary& run, const std::string& name) -> std::string {
        if (name == "policy") return run.policy;
        if (name == "trace") return run.trace_id;
        if (name == "seed") return std::to_string(run.seed);
        throw std::invalid_argument("aggregate: unknown group field " + name);
    };

    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto& run : runs) {
        std::string key;
        for (const auto& name : group_by) {
            if (!key.empty()) key += '/';
            key += field(run, name);
        }
        groups[key].first.push_back(run.miss_rate);
        groups[key].second.push_back(run.hit_rate);
    }

    std::vector<AggregateRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, values] : groups) {
        AggregateRow row;
        row.group = key;
        row.runs = values.first.size();
        row.miss_rate_mean = stats::mean(values.first);
        row.miss_rate_std = stats::stdev(values.first);
        row.hit_rate_mean = stats::mean(values.second);
        row.hit_rate_std = stats::stdev(values.second);
        rows.push_back(std::move(row));
    }
    return rows;
}

RunSummary make_summary(const SimStats& stats, const std::string& policy,
                        const std::string& trace_id, std::uint64_t seed,
                        double report_period_s,
                        std::map<std::string, std::string> config_echo) {
    RunSummary s;
    s.policy = policy;
    s.trace_id = trace_id;
    s.seed = seed;
    s.packets = stats.packets;
    s.hits = stats.hits;
    s.misses = stats.misses;
    s.miss_rate = stats.miss_rate();
    s.hit_rate = stats.hit_rate();
    s.report_period_s = report_period_s;
    s.interval_hit_rates.reserve(stats.series.size());
    for (const auto& iv : stats.series) {
        std::uint64_t total = iv.hits + iv.misses;
        s.interval_hit_rates.push_back(
            total ? static_cast<double>(iv.hits) / static_cast<double>(total) : 0.0);
    }
    s.config_echo = std::move(config_echo);
    return s;
}

void write_summary_json(const std::filesystem::path& path, const RunSummary& summary) {
    nlohmann::ordered_json j;
    j["policy"] = summary.policy;
    j["trace"] = summary.trace_id;
    j["seed"] = summary.seed;
    j["packets"] = summary.packets;
    j["hits"] = summary.hits;
    j["misses"] = summary.misses;
    j["miss_rate"] = summary.miss_rate;
    j["hit_rate"] = summary.hit_rate;
    j["report_period_s"] = summary.report_period_s;
    j["interval_hit_rates"] = summary.interval_hit_rates;
    j["config"] = summary.config_echo;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

RunSummary read_summary_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    nlohmann::json j = nlohmann::json::parse(in);
    RunSummary s;
    s.policy = j.at("policy").get<std::string>();
    s.trace_id = j.at("trace").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.packets = j.at("packets").get<std::uint64_t>();
    s.hits = j.at("hits").get<std::uint64_t>();
    s.misses = j.at("misses").get<std::uint64_t>();
    s.miss_rate = j.at("miss_rate").get<double>();
    s.hit_rate = j.at("hit_rate").get<double>();
    s.report_period_s = j.at("report_period_s").get<double>();
    s.interval_hit_rates = j.at("interval_hit_rates").get<std::vector<double>>();
    if (j.contains("config"))
        s.config_echo = j.at("config").get<std::map<std::string, std::string>>();
    return s;
}

namespace {

void write_num(std::ofstream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

}  // namespace

void write_timeseries_csv(const std::filesystem::path& path, const SimStats& stats) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "interval_start_s,hits,misses,hit_rate,cumulative_hit_rate\n";
    std::uint64_t cum_hits = 0, cum_total = 0;
    for (const auto& iv : stats.series) {
        std::uint64_t total = iv.hits + iv.misses;
        cum_hits += iv.hits;
        cum_total += total;
        write_num(out, iv.start_s);
        out << ',' << iv.hits << ',' << iv.misses << ',';
        write_num(out, total ? static_cast<double>(iv.hits) / static_cast<double>(total) : 0.0);
        out << ',';
        write_num(out, cum_total ? static_cast<double>(cum_hits) /
                                       static_cast<double>(cum_total)
                                 : 0.0);
        out << '\n';
    }
}

void write_aggregate_csv(const std::filesystem::path& path,
                         const std::vector<AggregateRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "group,runs,miss_rate_mean,miss_rate_std,hit_rate_mean,hit_rate_std\n";
    for (const auto& r : rows) {
        out << r.group << ',' << r.runs;
        for (double v : {r.miss_rate_mean, r.miss_rate_std, r.hit_rate_mean, r.hit_rate_std}) {
            out << ',';
            write_num(out, v);
        }
        out << '\n';
    }
}

}  // namespace bloomflow
