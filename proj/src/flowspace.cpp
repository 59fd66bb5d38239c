#include "bloomflow/flowspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace bloomflow {

std::string FlowId::str() const {
    return ipv4_to_string(src) + "." + ipv4_to_string(dst);
}

std::string ipv4_to_string(std::uint32_t addr) {
    std::string out;
    out.reserve(15);
    for (int shift = 24; shift >= 0; shift -= 8) {
        out += std::to_string((addr >> shift) & 0xFFu);
        if (shift) out += '.';
    }
    return out;
}

std::uint32_t parse_ipv4(std::string_view text) {
    std::uint32_t addr = 0;
    int octets = 0;
    std::size_t i = 0;
    while (i <= text.size()) {
        std::size_t start = i;
        std::uint32_t value = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            value = value * 10 + static_cast<std::uint32_t>(text[i] - '0');
            if (value > 255) throw std::invalid_argument("parse_ipv4: octet out of range");
            ++i;
        }
        if (i == start) throw std::invalid_argument("parse_ipv4: empty octet");
        addr = (addr << 8) | value;
        ++octets;
        if (i == text.size()) break;
        if (text[i] != '.') throw std::invalid_argument("parse_ipv4: unexpected character");
        ++i;
        if (i == text.size()) throw std::invalid_argument("parse_ipv4: trailing dot");
    }
    if (octets != 4) throw std::invalid_argument("parse_ipv4: need four octets");
    return addr;
}

FlowId make_flow_id(std::string_view src, std::string_view dst) {
    return FlowId{parse_ipv4(src), parse_ipv4(dst)};
}

SortedFlowSpace::SortedFlowSpace(std::vector<FlowId> flows) : flows_(std::move(flows)) {
    std::sort(flows_.begin(), flows_.end());
    flows_.erase(std::unique(flows_.begin(), flows_.end()), flows_.end());
    index_.reserve(flows_.size());
    for (std::size_t i = 0; i < flows_.size(); ++i) index_.emplace(flows_[i].key(), i);
}

std::optional<std::size_t> SortedFlowSpace::position(const FlowId& flow) const {
    auto it = index_.find(flow.key());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

LocalityWindow sample_window(const SortedFlowSpace& space, std::size_t size,
                             std::uint64_t rng_seed) {
    if (size < 2) throw std::invalid_argument("sample_window: size must be >= 2");
    if (size > space.size())
        throw std::invalid_argument("sample_window: size exceeds flow count");

    RandomStream rng(rng_seed);
    LocalityWindow window;
    window.size = size;
    window.start = static_cast<std::size_t>(rng.next_below(space.size() - size + 1));
    window.center = window.start + size / 2;

    std::size_t half = size / 2;
    auto picks = rng.sample_indices(static_cast<std::uint32_t>(size),
                                    static_cast<std::uint32_t>(half));
    std::sort(picks.begin(), picks.end());
    window.inserted.reserve(half);
    for (auto offset : picks) window.inserted.push_back(space.at(window.start + offset));
    return window;
}

CenterDistances mean_center_distance(const SortedFlowSpace& space,
                                     const LocalityWindow& window,
                                     const std::vector<FlowId>& detected) {
    std::unordered_set<std::uint64_t> inserted_keys;
    inserted_keys.reserve(window.inserted.size());
    for (const auto& f : window.inserted) inserted_keys.insert(f.key());

    double tp_sum = 0.0, fp_sum = 0.0;
    CenterDistances out;
    for (const auto& flow : detected) {
        auto pos = space.position(flow);
        if (!pos) throw std::invalid_argument("mean_center_distance: flow not in space");
        double dist = std::abs(static_cast<double>(*pos) -
                               static_cast<double>(window.center));
        if (inserted_keys.count(flow.key())) {
            tp_sum += dist;
            ++out.tp_count;
        } else {
            fp_sum += dist;
            ++out.fp_count;
        }
    }
    if (out.tp_count > 0) out.mean_tp_dist = tp_sum / static_cast<double>(out.tp_count);
    if (out.fp_count > 0) out.mean_fp_dist = fp_sum / static_cast<double>(out.fp_count);
    if (out.tp_count + out.fp_count > 0)
        out.mean_detected_dist =
            (tp_sum + fp_sum) / static_cast<double>(out.tp_count + out.fp_count);
    return out;
}

}  // namespace bloomflow
