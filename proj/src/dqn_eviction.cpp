#include "bloomflow/dqn_eviction.hpp"

#include <algorithm>
#include <stdexcept>

namespace bloomflow {

int compute_reward(std::uint64_t hits_this_eti, std::uint64_t hits_prev_eti) {
    if (hits_this_eti > hits_prev_eti) return 1;
    if (hits_this_eti < hits_prev_eti) return -1;
    return 0;
}

BloomFilter encode_table(const FlowTable& table, double fp_rate, std::uint64_t hash_seed) {
    BloomFilter filter(BloomParams{table.capacity(), fp_rate, hash_seed});
    for (const auto& [key, rule] : table.rules()) filter.insert(rule.flow.str());
    return filter;
}

std::size_t chunk_count(int capacity, double fp_rate) {
    BloomSize size = compute_size(static_cast<std::uint64_t>(capacity), fp_rate);
    return (size.bits + 31u) / 32u;
}

int state_dim(int capacity, double fp_rate) {
    return static_cast<int>(chunk_count(capacity, fp_rate)) + 2 * capacity;
}

std::vector<double> build_state(const FlowTable& table, const BloomFilter& filter,
                                double now, double idle_timeout_s) {
    std::vector<double> state;
    ChunkedState chunks = filter.to_chunks();
    state.reserve(chunks.chunks.size() + 2 * table.capacity());
    for (std::uint32_t c : chunks.chunks)
        state.push_back(static_cast<double>(c) / 4294967296.0);

    std::uint64_t max_hits = 0;
    for (const auto& [key, rule] : table.rules()) max_hits = std::max(max_hits, rule.hit_count);

    // rules() iterates in ascending key order
    std::size_t slot = 0;
    std::vector<double> hits(table.capacity(), 0.0);
    std::vector<double> recentness(table.capacity(), 0.0);
    for (const auto& [key, rule] : table.rules()) {
        hits[slot] = max_hits ? static_cast<double>(rule.hit_count) /
                                    static_cast<double>(max_hits)
                              : 0.0;
        double age = (now - rule.last_match) / idle_timeout_s;
        recentness[slot] = std::clamp(age, 0.0, 1.0);
        ++slot;
    }
    state.insert(state.end(), hits.begin(), hits.end());
    state.insert(state.end(), recentness.begin(), recentness.end());
    return state;
}

EvictionDecision apply_eviction_action(FlowTable& table, const BloomFilter& filter,
                                       int action, EvictionMode mode,
                                       std::uint64_t perturb_seed) {
    if (action < 0 || action >= kActionCount)
        throw std::invalid_argument("apply_eviction_action: action out of range");

    EvictionDecision decision;
    decision.action = action;

    BloomFilter probed = filter.perturb(static_cast<double>(action), perturb_seed);
    const FlowRule* victim = nullptr;
    for (const auto& [key, rule] : table.rules()) {
        if (probed.query(rule.flow.str())) continue;
        ++decision.absent_count;
        if (!victim) {
            victim = &rule;
            continue;
        }
        bool better = false;
        if (mode == EvictionMode::LRU) {
            better = rule.last_match < victim->last_match;
        } else {
            better = rule.hit_count < victim->hit_count ||
                     (rule.hit_count == victim->hit_count &&
                      rule.last_match < victim->last_match);
        }
        if (better) victim = &rule;  // key order already favors lower keys on ties
    }
    if (victim) {
        decision.evicted = victim->flow.key();
        table.remove(*decision.evicted);
    }
    return decision;
}

DqnEvictionHook::DqnEvictionHook(DqnAgent& agent, const DqnHookConfig& config)
    : agent_(agent), config_(config),
      hash_seed_(combine_seed(config.run_seed, 0xB100FULL)) {
    int expected = state_dim(config.capacity, config.bloom_fp);
    if (agent.config().input_dim != expected)
        throw std::invalid_argument("DqnEvictionHook: agent input_dim must be " +
                                    std::to_string(expected));
}

std::optional<std::uint64_t> DqnEvictionHook::on_eti(FlowTable& table, double now,
                                                     std::uint64_t window_hits) {
    ++eti_index_;
    if (!table.full()) return std::nullopt;  // hook only acts on a full table

    BloomFilter filter = encode_table(table, config_.bloom_fp, hash_seed_);
    std::vector<double> state = build_state(table, filter, now, config_.idle_timeout_s);

    if (prev_) {
        int reward = compute_reward(window_hits, prev_->window_hits);
        decisions_[prev_->decision_index].reward = reward;
        agent_.observe({prev_->state, prev_->action, reward, state, false});
        if (config_.train) agent_.maybe_train();
    }

    int action = config_.force_action ? *config_.force_action
                                      : agent_.select_action(state, true);
    EvictionDecision decision = apply_eviction_action(
        table, filter, action, config_.mode, combine_seed(config_.run_seed, 0x9E27, eti_index_));

    decisions_.push_back({now, decision.action, decision.absent_count, decision.evicted,
                          std::nullopt});
    prev_ = PendingTransition{std::move(state), action, window_hits, decisions_.size() - 1};
    return decision.evicted;
}

}  // namespace bloomflow
