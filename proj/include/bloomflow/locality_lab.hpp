#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bloomflow/bloom.hpp"
#include "bloomflow/flowspace.hpp"

namespace bloomflow {

struct LabConfig {
    std::vector<int> window_sizes;   // default 30..290 step 20
    std::vector<double> fp_rates;    // default {0.01, 0.05, 0.10, 0.30}
    std::vector<double> flip_pcts;   // default 5..30 step 5
    int trials = 200;
    std::uint64_t rng_seed = 1;
    std::uint32_t space_flows = 1000;
    double space_locality = 0.5;

    static LabConfig defaults();
    void validate() const;  // throws std::invalid_argument
};

struct TrialResult {
    double tp_rate = 0.0;
    std::optional<double> mean_tp_dist;
    std::optional<double> mean_fp_dist;
    std::optional<double> mean_detected_dist;
    std::size_t tp_count = 0;
    std::size_t fp_count = 0;
    std::size_t inserted_count = 0;
};

/// One controlled experiment cell: sample a window, insert half of it into
/// a filter sized for (floor(W/2), fp_rate), flip flip_pct of the bits,
/// query the whole space, and measure detection and distances.
TrialResult run_trial(const SortedFlowSpace& space, int window_size, double fp_rate,
                      double flip_pct, std::uint64_t rng_seed);

/// Aggregated cell of a trial grid. Distance means are over the trials in
/// which the category was nonempty (dist_trials counts them).
struct LabRow {
    std::string experiment;
    double fp_rate = 0.0;
    double flip_pct = 0.0;
    int window_size = 0;
    int trials = 0;
    double tp_rate_mean = 0.0, tp_rate_std = 0.0;
    double fp_dist_mean = 0.0, fp_dist_std = 0.0;
    double tp_dist_mean = 0.0, tp_dist_std = 0.0;
    double det_dist_mean = 0.0, det_dist_std = 0.0;
    int fp_dist_trials = 0, tp_dist_trials = 0, det_dist_trials = 0;
};

struct SizeRow {
    double fp_rate = 0.0;
    std::uint32_t m = 0;
    std::uint32_t k = 0;
};

/// Pure evaluation of the sizing formula over the fp grid.
std::vector<SizeRow> experiment_a_size_vs_fp(std::uint64_t n_items,
                                             const std::vector<double>& fp_rates);

/// TP rate across flip percentages, per (fp_rate, flip, window).
std::vector<LabRow> experiment_b_tp_vs_flip(const LabConfig& config,
                                            const SortedFlowSpace& space);

/// Detected-set distance sensitivity at window 110 (55 inserted).
std::vector<LabRow> experiment_c_distance_vs_flip(const LabConfig& config,
                                                  const SortedFlowSpace& space);

/// Action-range tuning sweep at window 64, fp 1%, flips 1..80.
std::vector<LabRow> experiment_d_design_choice(const LabConfig& config,
                                               const SortedFlowSpace& space);

/// Aggregate `trials` runs of one cell. Exposed for the acceptance suite.
LabRow aggregate_cell(const SortedFlowSpace& space, const std::string& experiment,
                      int window_size, double fp_rate, double flip_pct, int trials,
                      std::uint64_t cell_seed);

void write_size_csv(const std::filesystem::path& path, const std::vector<SizeRow>& rows,
                    std::uint64_t n_items);
void write_lab_csv(const std::filesystem::path& path, const std::vector<LabRow>& rows);

}  // namespace bloomflow
