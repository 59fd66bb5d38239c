#include "bloomflow/trace.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace bloomflow {

namespace {

std::string read_file_maybe_gz(const std::filesystem::path& path) {
    if (path.extension() == ".gz") {
        gzFile gz = gzopen(path.string().c_str(), "rb");
        if (!gz) throw std::runtime_error("cannot open trace: " + path.string());
        std::string out;
        char buf[1 << 16];
        int n;
        while ((n = gzread(gz, buf, sizeof(buf))) > 0) out.append(buf, static_cast<std::size_t>(n));
        bool ok = n == 0;
        gzclose(gz);
        if (!ok) throw std::runtime_error("gzip read failed: " + path.string());
        return out;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open trace: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_timestamp(std::string_view field, std::size_t line_no) {
    std::string text(field);
    char* end = nullptr;
    double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty() || !std::isfinite(value) || value < 0.0)
        throw std::runtime_error("trace line " + std::to_string(line_no) +
                                 ": bad timestamp '" + text + "'");
    return value;
}

}  // namespace

Trace load_trace(const std::filesystem::path& path) {
    std::string content = read_file_maybe_gz(path);

    Trace trace;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool saw_header = false;
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) eol = content.size();
        std::string_view line = trim(std::string_view(content).substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != "timestamp,src_ip,dst_ip")
                throw std::runtime_error("trace line 1: expected header timestamp,src_ip,dst_ip");
            saw_header = true;
            continue;
        }
        std::size_t c1 = line.find(',');
        std::size_t c2 = c1 == std::string_view::npos ? std::string_view::npos
                                                      : line.find(',', c1 + 1);
        if (c2 == std::string_view::npos)
            throw std::runtime_error("trace line " + std::to_string(line_no) +
                                     ": expected three fields");
        Packet pkt;
        pkt.timestamp = parse_timestamp(trim(line.substr(0, c1)), line_no);
        try {
            pkt.flow = make_flow_id(trim(line.substr(c1 + 1, c2 - c1 - 1)),
                                    trim(line.substr(c2 + 1)));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("trace line " + std::to_string(line_no) + ": " + e.what());
        }
        trace.packets.push_back(pkt);
    }
    if (!saw_header || trace.packets.empty())
        throw std::runtime_error("trace is empty: " + path.string());

    if (!std::is_sorted(trace.packets.begin(), trace.packets.end(),
                        [](const Packet& a, const Packet& b) { return a.timestamp < b.timestamp; })) {
        trace.sort_warnings = 1;
        std::stable_sort(trace.packets.begin(), trace.packets.end(),
                         [](const Packet& a, const Packet& b) { return a.timestamp < b.timestamp; });
    }

    std::vector<FlowId> flows;
    flows.reserve(trace.packets.size());
    for (const auto& p : trace.packets) flows.push_back(p.flow);
    trace.flow_space = SortedFlowSpace(std::move(flows));
    return trace;
}

void save_trace(const std::filesystem::path& path, const Trace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trace: " + path.string());
    out << "timestamp,src_ip,dst_ip\n";
    char buf[64];
    for (const auto& p : trace.packets) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.timestamp);
        out << buf << ',' << ipv4_to_string(p.flow.src) << ',' << ipv4_to_string(p.flow.dst)
            << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<FlowId> generate_flow_ids(std::uint32_t n_flows, double locality,
                                      RandomStream& rng) {
    if (n_flows < 1) throw std::invalid_argument("generate_flow_ids: n_flows must be >= 1");
    if (!(locality >= 0.0) || !(locality <= 1.0))
        throw std::invalid_argument("generate_flow_ids: locality must be in [0, 1]");

    // locality 0 -> every flow gets its own random /16 pair (keys uniform);
    // locality 1 -> one shared /16 pair (fully clustered sort keys).
    auto n_subnets = static_cast<std::uint32_t>(std::llround(
        std::pow(static_cast<double>(n_flows), 1.0 - locality)));
    n_subnets = std::max(1u, std::min(n_subnets, n_flows));

    std::vector<std::pair<std::uint32_t, std::uint32_t>> subnets(n_subnets);
    for (auto& s : subnets) {
        s.first = static_cast<std::uint32_t>(rng.next_u64() & 0xFFFF0000u);
        s.second = static_cast<std::uint32_t>(rng.next_u64() & 0xFFFF0000u);
    }

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(n_flows * 2);
    std::vector<FlowId> flows;
    flows.reserve(n_flows);
    while (flows.size() < n_flows) {
        const auto& subnet = subnets[rng.next_below(n_subnets)];
        FlowId flow{subnet.first | static_cast<std::uint32_t>(rng.next_u64() & 0xFFFFu),
                    subnet.second | static_cast<std::uint32_t>(rng.next_u64() & 0xFFFFu)};
        if (seen.insert(flow.key()).second) flows.push_back(flow);
    }
    return flows;
}

Trace generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_flows < 2) throw std::invalid_argument("generate_synthetic: n_flows must be >= 2");
    if (spec.n_packets < 1)
        throw std::invalid_argument("generate_synthetic: n_packets must be >= 1");
    if (!(spec.duration_s > 0.0))
        throw std::invalid_argument("generate_synthetic: duration_s must be positive");
    if (!(spec.zipf_s >= 0.0))
        throw std::invalid_argument("generate_synthetic: zipf_s must be >= 0");

    RandomStream rng(spec.seed);
    std::vector<FlowId> flows = generate_flow_ids(spec.n_flows, spec.locality, rng);

    // Zipf ranks follow generation order, which is already random.
    std::vector<double> cdf(spec.n_flows);
    double acc = 0.0;
    for (std::uint32_t r = 0; r < spec.n_flows; ++r) {
        acc += 1.0 / std::pow(static_cast<double>(r + 1), spec.zipf_s);
        cdf[r] = acc;
    }

    Trace trace;
    trace.packets.reserve(spec.n_packets);
    for (std::uint64_t i = 0; i < spec.n_packets; ++i) {
        double u = rng.next_unit() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = std::min<std::size_t>(
            static_cast<std::size_t>(it - cdf.begin()), spec.n_flows - 1);
        trace.packets.push_back({rng.next_unit() * spec.duration_s, flows[idx]});
    }
    std::stable_sort(trace.packets.begin(), trace.packets.end(),
                     [](const Packet& a, const Packet& b) { return a.timestamp < b.timestamp; });

    std::vector<FlowId> used;
    used.reserve(trace.packets.size());
    for (const auto& p : trace.packets) used.push_back(p.flow);
    trace.flow_space = SortedFlowSpace(std::move(used));
    return trace;
}

}  // namespace bloomflow
