#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bloomflow/flowspace.hpp"

namespace bloomflow {

struct Packet {
    double timestamp = 0.0;  // seconds
    FlowId flow;
};

struct Trace {
    std::vector<Packet> packets;  // sorted by timestamp
    SortedFlowSpace flow_space;   // unique flows appearing in packets
    unsigned sort_warnings = 0;   // nonzero if the input needed reordering
};

/// Load a `timestamp,src_ip,dst_ip` CSV trace. Files ending in .gz are
/// inflated transparently. Malformed rows raise std::runtime_error with
/// the offending line number; out-of-order timestamps are stably sorted
/// and counted in sort_warnings.
Trace load_trace(const std::filesystem::path& path);

/// Write the same CSV schema with round-trip-exact timestamps.
void save_trace(const std::filesystem::path& path, const Trace& trace);

struct SyntheticSpec {
    std::uint32_t n_flows = 600;
    std::uint64_t n_packets = 300000;
    double duration_s = 1800.0;
    double locality = 0.5;  // 0 = uniform keys, 1 = a single subnet cluster
    double zipf_s = 1.0;    // 0 = uniform packet counts per flow
    std::uint64_t seed = 1;
};

/// Clustered IP pairs: locality interpolates the number of /16-style
/// subnet clusters between n_flows (no clustering) and 1.
std::vector<FlowId> generate_flow_ids(std::uint32_t n_flows, double locality,
                                      RandomStream& rng);

/// Pure function of its spec: Zipf-weighted flow choices, uniform arrival
/// times sorted ascending.
Trace generate_synthetic(const SyntheticSpec& spec);

}  // namespace bloomflow
