#include "bloomflow/locality_lab.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "bloomflow/stats.hpp"

namespace bloomflow {

LabConfig LabConfig::defaults() {
    LabConfig c;
    for (int w = 30; w <= 290; w += 20) c.window_sizes.push_back(w);
    c.fp_rates = {0.01, 0.05, 0.10, 0.30};
    for (int f = 5; f <= 30; f += 5) c.flip_pcts.push_back(f);
    return c;
}

void LabConfig::validate() const {
    if (window_sizes.empty()) throw std::invalid_argument("lab: window_sizes is empty");
    if (fp_rates.empty()) throw std::invalid_argument("lab: fp_rates is empty");
    if (flip_pcts.empty()) throw std::invalid_argument("lab: flip_pcts is empty");
    if (trials < 1) throw std::invalid_argument("lab: trials must be >= 1");
    if (space_flows < 2) throw std::invalid_argument("lab: space_flows must be >= 2");
}

TrialResult run_trial(const SortedFlowSpace& space, int window_size, double fp_rate,
                      double flip_pct, std::uint64_t rng_seed) {
    LocalityWindow window = sample_window(space, static_cast<std::size_t>(window_size),
                                          combine_seed(rng_seed, 1));

    BloomFilter filter(BloomParams{window.inserted.size(), fp_rate, combine_seed(rng_seed, 2)});
    for (const auto& flow : window.inserted) filter.insert(flow.str());
    BloomFilter probed = filter.perturb(flip_pct, combine_seed(rng_seed, 3));

    std::vector<FlowId> detected;
    for (const auto& flow : space.flows()) {
        if (probed.query(flow.str())) detected.push_back(flow);
    }

    CenterDistances dist = mean_center_distance(space, window, detected);
    TrialResult result;
    result.inserted_count = window.inserted.size();
    result.tp_count = dist.tp_count;
    result.fp_count = dist.fp_count;
    result.tp_rate = static_cast<double>(dist.tp_count) /
                     static_cast<double>(window.inserted.size());
    result.mean_tp_dist = dist.mean_tp_dist;
    result.mean_fp_dist = dist.mean_fp_dist;
    result.mean_detected_dist = dist.mean_detected_dist;
    return result;
}

namespace {

struct Accumulator {
    std::vector<double> tp_rates, fp_dists, tp_dists, det_dists;

    void add(const TrialResult& t) {
        tp_rates.push_back(t.tp_rate);
        if (t.mean_fp_dist) fp_dists.push_back(*t.mean_fp_dist);
        if (t.mean_tp_dist) tp_dists.push_back(*t.mean_tp_dist);
        if (t.mean_detected_dist) det_dists.push_back(*t.mean_detected_dist);
    }
};

}  // namespace

LabRow aggregate_cell(const SortedFlowSpace& space, const std::string& experiment,
                      int window_size, double fp_rate, double flip_pct, int trials,
                      std::uint64_t cell_seed) {
    Accumulator acc;
    for (int t = 0; t < trials; ++t) {
        acc.add(run_trial(space, window_size, fp_rate, flip_pct,
                          combine_seed(cell_seed, static_cast<std::uint64_t>(t))));
    }
    LabRow row;
    row.experiment = experiment;
    row.fp_rate = fp_rate;
    row.flip_pct = flip_pct;
    row.window_size = window_size;
    row.trials = trials;
    row.tp_rate_mean = stats::mean(acc.tp_rates);
    row.tp_rate_std = stats::stdev(acc.tp_rates);
    row.fp_dist_mean = stats::mean(acc.fp_dists);
    row.fp_dist_std = stats::stdev(acc.fp_dists);
    row.tp_dist_mean = stats::mean(acc.tp_dists);
    row.tp_dist_std = stats::stdev(acc.tp_dists);
    row.det_dist_mean = stats::mean(acc.det_dists);
    row.det_dist_std = stats::stdev(acc.det_dists);
    row.fp_dist_trials = static_cast<int>(acc.fp_dists.size());
    row.tp_dist_trials = static_cast<int>(acc.tp_dists.size());
    row.det_dist_trials = static_cast<int>(acc.det_dists.size());
    return row;
}

std::vector<SizeRow> experiment_a_size_vs_fp(std::uint64_t n_items,
                                             const std::vector<double>& fp_rates) {
    std::vector<SizeRow> rows;
    rows.reserve(fp_rates.size());
    for (double p : fp_rates) {
        BloomSize size = compute_size(n_items, p);
        rows.push_back({p, size.bits, size.hashes});
    }
    return rows;
}

std::vector<LabRow> experiment_b_tp_vs_flip(const LabConfig& config,
                                            const SortedFlowSpace& space) {
    config.validate();
    std::vector<LabRow> rows;
    std::uint64_t cell = 0;
    for (double fp : config.fp_rates) {
        for (double flip : config.flip_pcts) {
            for (int w : config.window_sizes) {
                rows.push_back(aggregate_cell(space, "b_tp_vs_flip", w, fp, flip,
                                              config.trials,
                                              combine_seed(config.rng_seed, 0xB, cell)));
                ++cell;
            }
        }
    }
    return rows;
}

std::vector<LabRow> experiment_c_distance_vs_flip(const LabConfig& config,
                                                  const SortedFlowSpace& space) {
    config.validate();
    constexpr int kWindow = 110;  // 55 inserted
    std::vector<LabRow> rows;
    std::uint64_t cell = 0;
    for (double fp : config.fp_rates) {
        for (double flip : config.flip_pcts) {
            rows.push_back(aggregate_cell(space, "c_distance_vs_flip", kWindow, fp, flip,
                                          config.trials,
                                          combine_seed(config.rng_seed, 0xC, cell)));
            ++cell;
        }
    }
    return rows;
}

std::vector<LabRow> experiment_d_design_choice(const LabConfig& config,
                                               const SortedFlowSpace& space) {
    constexpr int kWindow = 64;    // 32 inserted
    constexpr double kFp = 0.01;
    std::vector<LabRow> rows;
    std::uint64_t cell = 0;
    for (int flip = 1; flip <= 80; ++flip) {
        rows.push_back(aggregate_cell(space, "d_design_choice", kWindow, kFp,
                                      static_cast<double>(flip), config.trials,
                                      combine_seed(config.rng_seed, 0xD, cell)));
        ++cell;
    }
    return rows;
}

namespace {

void write_num(std::ofstream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

}  // namespace

void write_size_csv(const std::filesystem::path& path, const std::vector<SizeRow>& rows,
                    std::uint64_t n_items) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "experiment,n_items,fp_rate,m_bits,k_hashes\n";
    for (const auto& r : rows) {
        out << "a_size_vs_fp," << n_items << ',';
        write_num(out, r.fp_rate);
        out << ',' << r.m << ',' << r.k << '\n';
    }
}

void write_lab_csv(const std::filesystem::path& path, const std::vector<LabRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "experiment,fp_rate,flip_pct,window_size,trials,"
           "tp_rate_mean,tp_rate_std,fp_dist_mean,fp_dist_std,"
           "tp_dist_mean,tp_dist_std,det_dist_mean,det_dist_std\n";
    for (const auto& r : rows) {
        out << r.experiment << ',';
        write_num(out, r.fp_rate);
        out << ',';
        write_num(out, r.flip_pct);
        out << ',' << r.window_size << ',' << r.trials;
        for (double v : {r.tp_rate_mean, r.tp_rate_std, r.fp_dist_mean, r.fp_dist_std,
                         r.tp_dist_mean, r.tp_dist_std, r.det_dist_mean, r.det_dist_std}) {
            out << ',';
            write_num(out, v);
        }
        out << '\n';
    }
}

}  // namespace bloomflow
