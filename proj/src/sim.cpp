#include "bloomflow/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bloomflow {

Policy parse_policy(const std::string& name) {
    if (name == "LRU") return Policy::LRU;
    if (name == "LFU") return Policy::LFU;
    if (name == "OPTIMAL") return Policy::OPTIMAL;
    if (name == "DQN_LRU") return Policy::DQN_LRU;
    if (name == "DQN_LFU") return Policy::DQN_LFU;
    throw std::invalid_argument("unknown policy: " + name);
}

std::string policy_name(Policy policy) {
    switch (policy) {
        case Policy::LRU: return "LRU";
        case Policy::LFU: return "LFU";
        case Policy::OPTIMAL: return "OPTIMAL";
        case Policy::DQN_LRU: return "DQN_LRU";
        case Policy::DQN_LFU: return "DQN_LFU";
    }
    return "?";
}

bool is_dqn_policy(Policy policy) {
    return policy == Policy::DQN_LRU || policy == Policy::DQN_LFU;
}

FlowTable::FlowTable(std::size_t capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("FlowTable: capacity must be >= 1");
}

FlowRule* FlowTable::find(std::uint64_t key) {
    auto it = rules_.find(key);
    return it == rules_.end() ? nullptr : &it->second;
}

void FlowTable::install(const FlowRule& rule) {
    if (full()) throw std::logic_error("FlowTable: install into full table");
    if (!rules_.emplace(rule.flow.key(), rule).second)
        throw std::logic_error("FlowTable: duplicate install");
}

void FlowTable::remove(std::uint64_t key) {
    if (rules_.erase(key) == 0) throw std::logic_error("FlowTable: remove of absent rule");
}

std::uint64_t evict_lru(const FlowTable& table) {
    const FlowRule* best = nullptr;
    for (const auto& [key, rule] : table.rules()) {
        if (!best || rule.last_match < best->last_match) best = &rule;
    }
    if (!best) throw std::logic_error("evict_lru: empty table");
    return best->flow.key();  // map order makes the lowest key win ties
}

std::uint64_t evict_lfu(const FlowTable& table) {
    const FlowRule* best = nullptr;
    for (const auto& [key, rule] : table.rules()) {
        if (!best || rule.hit_count < best->hit_count ||
            (rule.hit_count == best->hit_count && rule.last_match < best->last_match)) {
            best = &rule;
        }
    }
    if (!best) throw std::logic_error("evict_lfu: empty table");
    return best->flow.key();
}

NextArrivalIndex::NextArrivalIndex(const Trace& trace) {
    for (std::uint64_t i = 0; i < trace.packets.size(); ++i)
        by_flow_[trace.packets[i].flow.key()].push_back(i);
}

std::optional<std::uint64_t> NextArrivalIndex::next_for(std::uint64_t key,
                                                        std::uint64_t from) {
    auto it = by_flow_.find(key);
    if (it == by_flow_.end()) return std::nullopt;
    const auto& indices = it->second;
    std::size_t& cur = cursor_[key];
    while (cur < indices.size() && indices[cur] < from) ++cur;
    if (cur == indices.size()) return std::nullopt;
    return indices[cur];
}

std::uint64_t evict_optimal(const FlowTable& table, NextArrivalIndex& index,
                            std::uint64_t next_unprocessed) {
    constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t best_key = 0;
    std::uint64_t best_next = 0;
    bool have = false;
    for (const auto& [key, rule] : table.rules()) {
        std::uint64_t next = index.next_for(key, next_unprocessed).value_or(kNever);
        if (!have || next > best_next) {  // strict: earlier keys win ties
            best_key = key;
            best_next = next;
            have = true;
        }
    }
    if (!have) throw std::logic_error("evict_optimal: empty table");
    return best_key;
}

void SimConfig::validate() const {
    if (rti_s < 0.0) throw std::invalid_argument("sim: rti_s must be >= 0");
    if (!(idle_timeout_s > 0.0)) throw std::invalid_argument("sim: idle_timeout_s must be > 0");
    if (eti_multiple < 1) throw std::invalid_argument("sim: eti_multiple must be >= 1");
    if (capacity < 1) throw std::invalid_argument("sim: capacity must be >= 1");
    if (!(report_period_s > 0.0))
        throw std::invalid_argument("sim: report_period_s must be > 0");
    if (tick_s != 0.0 && (tick_s <= 0.0 || (rti_s > 0.0 && tick_s > rti_s)))
        throw std::invalid_argument("sim: tick_s must be in (0, rti_s]");
    if (is_dqn_policy(policy) && rti_s == 0.0)
        throw std::invalid_argument("sim: DQN policies need rti_s > 0 (ETI is a multiple of RTI)");
}

namespace {

class Runner {
public:
    Runner(const Trace& trace, const SimConfig& config, EtiHook* hook,
           const SimOptions& options)
        : trace_(trace),
          config_(config),
          hook_(hook),
          options_(options),
          table_(static_cast<std::size_t>(config.capacity)) {
        if (is_dqn_policy(config.policy) && !hook_)
            throw std::invalid_argument("sim: DQN policy requires an eviction hook");
        if (config.policy == Policy::OPTIMAL) arrivals_.emplace(trace);
    }

    SimResult run() {
        if (config_.rti_s == 0.0) {
            run_classic();
        } else {
            run_ticked();
        }
        finish_series();
        return std::move(result_);
    }

private:
    struct Pending {
        double due;
        std::uint64_t key;
        FlowId flow;
    };

    const Trace& trace_;
    const SimConfig& config_;
    EtiHook* hook_;
    SimOptions options_;
    FlowTable table_;
    std::optional<NextArrivalIndex> arrivals_;
    std::vector<Pending> pending_;  // small; scanned linearly
    SimResult result_;
    std::uint64_t cursor_ = 0;      // next unprocessed packet index
    std::uint64_t hits_at_boundary_ = 0;

    // interval accumulation
    std::size_t interval_ = 0;
    std::uint64_t interval_hits_ = 0, interval_misses_ = 0;

    void record(double time, SimEventKind kind, std::uint64_t key) {
        if (options_.record_events) result_.events.push_back({time, kind, key});
    }

    void roll_intervals(double ts) {
        auto idx = static_cast<std::size_t>(ts / config_.report_period_s);
        while (interval_ < idx) {
            result_.stats.series.push_back({static_cast<double>(interval_) *
                                                config_.report_period_s,
                                            interval_hits_, interval_misses_});
            interval_hits_ = interval_misses_ = 0;
            ++interval_;
        }
    }

    void finish_series() {
        result_.stats.series.push_back({static_cast<double>(interval_) *
                                            config_.report_period_s,
                                        interval_hits_, interval_misses_});
    }

    void expire_idle(double now) {
        // Collect first: removal invalidates iteration. Deadline order, then key.
        std::vector<std::pair<double, std::uint64_t>> due;
        for (const auto& [key, rule] : table_.rules()) {
            if (rule.idle_deadline <= now) due.emplace_back(rule.idle_deadline, key);
        }
        std::sort(due.begin(), due.end());
        for (const auto& [deadline, key] : due) {
            table_.remove(key);
            ++result_.stats.idle_expirations;
            record(now, SimEventKind::Expire, key);
        }
    }

    void evict_for_install(double now) {
        std::uint64_t victim;
        switch (config_.policy) {
            case Policy::OPTIMAL: victim = evict_optimal(table_, *arrivals_, cursor_); break;
            case Policy::LFU:
            case Policy::DQN_LFU: victim = evict_lfu(table_); break;
            default: victim = evict_lru(table_); break;
        }
        table_.remove(victim);
        ++result_.stats.install_evictions;
        record(now, SimEventKind::EvictInstall, victim);
    }

    void install_flow(const FlowId& flow, double completion) {
        if (table_.full()) evict_for_install(completion);
        FlowRule rule;
        rule.flow = flow;
        rule.installed_at = completion;
        rule.last_match = completion;
        rule.idle_deadline = completion + config_.idle_timeout_s;
        rule.hit_count = 0;
        table_.install(rule);
        ++result_.stats.installs;
        record(completion, SimEventKind::Install, flow.key());
    }

    void complete_installs(double now) {
        std::vector<Pending> due;
        for (const auto& p : pending_) {
            if (p.due <= now) due.push_back(p);
        }
        if (due.empty()) return;
        std::erase_if(pending_, [&](const Pending& p) { return p.due <= now; });
        // Same-tick completions are applied in flow-key order.
        std::sort(due.begin(), due.end(),
                  [](const Pending& a, const Pending& b) { return a.key < b.key; });
        for (const auto& p : due) install_flow(p.flow, p.due);
    }

    bool has_pending(std::uint64_t key) const {
        for (const auto& p : pending_) {
            if (p.key == key) return true;
        }
        return false;
    }

    void step_packet(const Packet& pkt) {
        ++result_.stats.packets;
        roll_intervals(pkt.timestamp);
        if (FlowRule* rule = table_.find(pkt.flow.key())) {
            ++rule->hit_count;
            rule->last_match = pkt.timestamp;
            rule->idle_deadline = pkt.timestamp + config_.idle_timeout_s;
            ++result_.stats.hits;
            ++interval_hits_;
        } else {
            ++result_.stats.misses;
            ++interval_misses_;
            if (!has_pending(pkt.flow.key())) {
                pending_.push_back({pkt.timestamp + config_.rti_s, pkt.flow.key(), pkt.flow});
            }
        }
    }

    void run_classic() {
        // rti 0: installs complete inline before the next packet.
        for (const auto& pkt : trace_.packets) {
            expire_idle(pkt.timestamp);
            step_packet(pkt);
            ++cursor_;
            complete_installs(pkt.timestamp);
        }
    }

    void run_ticked() {
        const double dt = config_.tick_s > 0.0 ? config_.tick_s : config_.rti_s / 10.0;
        const auto ticks_per_eti = static_cast<std::uint64_t>(
            std::max<long long>(1, std::llround(config_.eti_multiple * config_.rti_s / dt)));
        const std::uint64_t n = trace_.packets.size();

        std::uint64_t tick = 0;
        while (cursor_ < n || !pending_.empty()) {
            double t = static_cast<double>(tick) * dt;
            expire_idle(t);
            complete_installs(t);
            double t_end = static_cast<double>(tick + 1) * dt;
            while (cursor_ < n && trace_.packets[cursor_].timestamp < t_end) {
                step_packet(trace_.packets[cursor_]);
                ++cursor_;
            }
            ++tick;
            if (hook_ && tick % ticks_per_eti == 0) {
                double boundary = static_cast<double>(tick) * dt;
                std::uint64_t window_hits = result_.stats.hits - hits_at_boundary_;
                hits_at_boundary_ = result_.stats.hits;
                ++result_.stats.eti_boundaries;
                if (auto victim = hook_->on_eti(table_, boundary, window_hits)) {
                    ++result_.stats.dqn_evictions;
                    record(boundary, SimEventKind::EvictDqn, *victim);
                }
            }
        }
    }
};

}  // namespace

SimResult run_simulation(const Trace& trace, const SimConfig& config, EtiHook* hook,
                         const SimOptions& options) {
    config.validate();
    Runner runner(trace, config, hook, options);
    return runner.run();
}

}  // namespace bloomflow
