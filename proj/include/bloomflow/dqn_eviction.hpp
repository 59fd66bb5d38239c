#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bloomflow/bloom.hpp"
#include "bloomflow/dqn.hpp"
#include "bloomflow/sim.hpp"

namespace bloomflow {

/// Eviction criterion applied to the absent set.
enum class EvictionMode { LRU, LFU };

/// +1 if hits grew against the previous ETI window, 0 if equal, -1 if
/// they shrank.
int compute_reward(std::uint64_t hits_this_eti, std::uint64_t hits_prev_eti);

/// Encode every installed flow's canonical string into a filter sized for
/// (capacity, fp_rate). The hash seed stays fixed for a whole run.
BloomFilter encode_table(const FlowTable& table, double fp_rate, std::uint64_t hash_seed);

/// Number of 32-bit chunks the encoded table produces.
std::size_t chunk_count(int capacity, double fp_rate);

/// State layout: chunks / 2^32 first, then `capacity` hit-count slots
/// normalized by their max, then `capacity` recentness slots
/// (now - last_match) / idle_timeout clamped to [0, 1]. Rule slots are
/// ordered by ascending flow key; vacant slots stay zero.
std::vector<double> build_state(const FlowTable& table, const BloomFilter& filter,
                                double now, double idle_timeout_s);

/// State vector length for a given configuration.
int state_dim(int capacity, double fp_rate);

struct EvictionDecision {
    int action = 0;
    std::size_t absent_count = 0;
    std::optional<std::uint64_t> evicted;
};

/// Steps 4-6 of the ETI procedure for a chosen action: perturb a copy of
/// the filter, look up every installed flow, and evict the lowest-
/// recentness (LRU) or lowest-frequency (LFU) flow among those the
/// perturbed filter no longer recognizes. Action 0 can never evict.
EvictionDecision apply_eviction_action(FlowTable& table, const BloomFilter& filter,
                                       int action, EvictionMode mode,
                                       std::uint64_t perturb_seed);

struct DecisionRecord {
    double time = 0.0;
    int action = 0;
    std::size_t absent_count = 0;
    std::optional<std::uint64_t> evicted;
    std::optional<int> reward;  // filled once the next acted ETI resolves it
};

struct DqnHookConfig {
    int capacity = 32;
    double bloom_fp = 0.01;  // per the design-choice experiment
    double idle_timeout_s = 30.0;
    EvictionMode mode = EvictionMode::LRU;
    std::uint64_t run_seed = 101;
    std::optional<int> force_action;  // pins the action; no exploration
    bool train = true;
};

/// The EtiHook wired into run_simulation: builds the state, asks the
/// agent for a perturbation level, evicts among absent flows, and feeds
/// transitions back for training. ETIs with a non-full table are skipped
/// and do not interact with the agent.
class DqnEvictionHook : public EtiHook {
public:
    DqnEvictionHook(DqnAgent& agent, const DqnHookConfig& config);

    std::optional<std::uint64_t> on_eti(FlowTable& table, double now,
                                        std::uint64_t window_hits) override;

    const std::vector<DecisionRecord>& decisions() const { return decisions_; }

private:
    DqnAgent& agent_;
    DqnHookConfig config_;
    std::uint64_t hash_seed_;
    std::uint64_t eti_index_ = 0;

    struct PendingTransition {
        std::vector<double> state;
        int action = 0;
        std::uint64_t window_hits = 0;
        std::size_t decision_index = 0;
    };
    std::optional<PendingTransition> prev_;
    std::vector<DecisionRecord> decisions_;
};

}  // namespace bloomflow
