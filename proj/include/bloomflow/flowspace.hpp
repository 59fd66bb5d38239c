#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bloomflow/rng.hpp"

namespace bloomflow {

/// IPv4 source/destination pair. The 64-bit sort key concatenates the two
/// addresses, source in the high half, so sorting by key groups flows by
/// shared source prefix first.
struct FlowId {
    std::uint32_t src = 0;
    std::uint32_t dst = 0;

    std::uint64_t key() const {
        return (static_cast<std::uint64_t>(src) << 32) | static_cast<std::uint64_t>(dst);
    }

    /// "srcIP.dstIP": eight dot-separated decimal octets.
    std::string str() const;

    friend auto operator<=>(const FlowId& a, const FlowId& b) {
        return a.key() <=> b.key();
    }
    friend bool operator==(const FlowId& a, const FlowId& b) { return a.key() == b.key(); }
};

/// Parse a dotted-quad IPv4 address. Throws std::invalid_argument on
/// anything but exactly four decimal octets in [0, 255].
std::uint32_t parse_ipv4(std::string_view text);
std::string ipv4_to_string(std::uint32_t addr);

FlowId make_flow_id(std::string_view src, std::string_view dst);

/// Deduplicated flows in ascending key order with O(1) position lookup.
/// Immutable once built.
class SortedFlowSpace {
public:
    SortedFlowSpace() = default;
    explicit SortedFlowSpace(std::vector<FlowId> flows);

    std::size_t size() const { return flows_.size(); }
    bool empty() const { return flows_.empty(); }
    const FlowId& at(std::size_t i) const { return flows_[i]; }
    const std::vector<FlowId>& flows() const { return flows_; }
    std::optional<std::size_t> position(const FlowId& flow) const;

private:
    std::vector<FlowId> flows_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Contiguous slice of the sorted space with half its flows marked for
/// insertion into a Bloom filter.
struct LocalityWindow {
    std::size_t start = 0;
    std::size_t size = 0;
    std::size_t center = 0;  // start + size / 2
    std::vector<FlowId> inserted;
};

/// Uniform window start, floor(size/2) inserted flows drawn uniformly
/// without replacement from the window. Throws for size < 2 or
/// size > space size.
LocalityWindow sample_window(const SortedFlowSpace& space, std::size_t size,
                             std::uint64_t rng_seed);

struct CenterDistances {
    std::optional<double> mean_tp_dist;        // inserted flows still detected
    std::optional<double> mean_fp_dist;        // detected but never inserted
    std::optional<double> mean_detected_dist;  // all detected flows pooled
    std::size_t tp_count = 0;
    std::size_t fp_count = 0;
};

/// Absolute sorted-index distance of each detected flow to the window
/// center, averaged per detection category. Detected flows must belong to
/// the space.
CenterDistances mean_center_distance(const SortedFlowSpace& space,
                                     const LocalityWindow& window,
                                     const std::vector<FlowId>& detected);

}  // namespace bloomflow
