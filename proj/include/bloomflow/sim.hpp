#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bloomflow/trace.hpp"

namespace bloomflow {

enum class Policy { LRU, LFU, OPTIMAL, DQN_LRU, DQN_LFU };

Policy parse_policy(const std::string& name);  // throws on unknown name
std::string policy_name(Policy policy);
bool is_dqn_policy(Policy policy);

struct FlowRule {
    FlowId flow;
    double installed_at = 0.0;
    double last_match = 0.0;
    double idle_deadline = 0.0;
    std::uint64_t hit_count = 0;  // matches since install
};

/// Capacity-bounded rule set keyed by flow. Ordered by flow key so every
/// scan is deterministic.
class FlowTable {
public:
    explicit FlowTable(std::size_t capacity);

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return rules_.size(); }
    bool full() const { return rules_.size() == capacity_; }

    FlowRule* find(std::uint64_t key);
    const std::map<std::uint64_t, FlowRule>& rules() const { return rules_; }

    void install(const FlowRule& rule);     // throws if full or duplicate
    void remove(std::uint64_t key);         // throws if absent

private:
    std::size_t capacity_;
    std::map<std::uint64_t, FlowRule> rules_;
};

/// Victim with the oldest last_match; ties broken by lowest flow key.
std::uint64_t evict_lru(const FlowTable& table);
/// Victim with the fewest hits; ties by oldest last_match, then lowest key.
std::uint64_t evict_lfu(const FlowTable& table);

/// Next-arrival lookup for Belady eviction: packet indices per flow, with
/// amortized-monotone cursors.
class NextArrivalIndex {
public:
    explicit NextArrivalIndex(const Trace& trace);
    /// First packet index >= from for the flow, or none.
    std::optional<std::uint64_t> next_for(std::uint64_t key, std::uint64_t from);

private:
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> by_flow_;
    std::unordered_map<std::uint64_t, std::size_t> cursor_;
};

/// Victim whose next packet is farthest in the future; flows with no
/// future packet are preferred; ties by lowest key.
std::uint64_t evict_optimal(const FlowTable& table, NextArrivalIndex& index,
                            std::uint64_t next_unprocessed);

struct SimConfig {
    double rti_s = 0.01;
    double idle_timeout_s = 30.0;  // +infinity disables expiry
    int eti_multiple = 100;        // ETI = eti_multiple * rti_s
    int capacity = 32;
    Policy policy = Policy::LRU;
    double tick_s = 0.0;           // 0 -> rti_s / 10
    std::uint64_t seed = 101;
    double report_period_s = 60.0;

    void validate() const;  // throws std::invalid_argument
};

struct IntervalStats {
    double start_s = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
};

struct SimStats {
    std::uint64_t packets = 0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t installs = 0;
    std::uint64_t install_evictions = 0;
    std::uint64_t dqn_evictions = 0;
    std::uint64_t idle_expirations = 0;
    std::uint64_t eti_boundaries = 0;
    std::vector<IntervalStats> series;

    double miss_rate() const {
        std::uint64_t total = hits + misses;
        return total ? static_cast<double>(misses) / static_cast<double>(total) : 0.0;
    }
    double hit_rate() const {
        std::uint64_t total = hits + misses;
        return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
    }
};

enum class SimEventKind { Install, EvictInstall, EvictDqn, Expire };

struct SimEvent {
    double time = 0.0;
    SimEventKind kind = SimEventKind::Install;
    std::uint64_t flow_key = 0;

    friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

/// Per-ETI callback implemented by the DQN eviction hook. Fires after the
/// arrivals of the tick that closes at the boundary; may evict at most one
/// rule and reports the victim.
class EtiHook {
public:
    virtual ~EtiHook() = default;
    virtual std::optional<std::uint64_t> on_eti(FlowTable& table, double now,
                                                std::uint64_t window_hits) = 0;
};

struct SimResult {
    SimStats stats;
    std::vector<SimEvent> events;  // only populated when record_events is set
};

struct SimOptions {
    bool record_events = false;
};

/// Discrete-time reactive SFT simulation. Tick order: expire idle,
/// complete due installs, arrivals, then the ETI hook at boundaries.
/// rti_s = 0 degenerates to a classic cache with inline installs.
/// A DQN hook is required iff the policy is DQN_*.
SimResult run_simulation(const Trace& trace, const SimConfig& config,
                         EtiHook* hook = nullptr, const SimOptions& options = {});

}  // namespace bloomflow
