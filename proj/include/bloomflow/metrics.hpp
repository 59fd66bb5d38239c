#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bloomflow/sim.hpp"

namespace bloomflow {

struct RunSummary {
    std::string policy;
    std::string trace_id;
    std::uint64_t seed = 0;
    std::uint64_t packets = 0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    double miss_rate = 0.0;
    double hit_rate = 0.0;
    double report_period_s = 60.0;
    std::vector<double> interval_hit_rates;
    std::map<std::string, std::string> config_echo;  // full resolved config
};

/// (M_strategy - M_optimal) / M_optimal; absent when M_optimal == 0.
std::optional<double> normalized_miss_rate(double m_strategy, double m_optimal);

/// Mean of (a - b) over the trailing `window` samples. Throws on length
/// mismatch or empty window.
double hit_rate_delta(std::span<const double> series_a, std::span<const double> series_b,
                      std::size_t window);

struct AggregateRow {
    std::string group;
    std::size_t runs = 0;
    double miss_rate_mean = 0.0;
    double miss_rate_std = 0.0;
    double hit_rate_mean = 0.0;
    double hit_rate_std = 0.0;
};

/// Group runs by the named summary fields ("policy", "trace", "seed") and
/// report mean/stdev per group, ordered by group key.
std::vector<AggregateRow> aggregate(const std::vector<RunSummary>& runs,
                                    const std::vector<std::string>& group_by);

RunSummary make_summary(const SimStats& stats, const std::string& policy,
                        const std::string& trace_id, std::uint64_t seed,
                        double report_period_s,
                        std::map<std::string, std::string> config_echo);

void write_summary_json(const std::filesystem::path& path, const RunSummary& summary);
RunSummary read_summary_json(const std::filesystem::path& path);

void write_timeseries_csv(const std::filesystem::path& path, const SimStats& stats);
void write_aggregate_csv(const std::filesystem::path& path,
                         const std::vector<AggregateRow>& rows);

}  // namespace bloomflow
