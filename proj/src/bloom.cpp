#include "bloomflow/bloom.hpp"

#include <cmath>
#include <stdexcept>

namespace bloomflow {

namespace {

constexpr std::uint64_t kSecondStreamSalt = 0x6a09e667f3bcc908ULL;

inline std::uint32_t probe_position(std::uint64_t h1, std::uint64_t h2, std::uint32_t i,
                                    std::uint32_t m) {
    return static_cast<std::uint32_t>((h1 + static_cast<std::uint64_t>(i) * h2) % m);
}

}  // namespace

BloomSize compute_size(std::uint64_t n_items, double target_fp) {
    if (n_items < 1) throw std::invalid_argument("compute_size: n_items must be >= 1");
    if (!(target_fp > 0.0) || !(target_fp < 1.0))
        throw std::invalid_argument("compute_size: target_fp must be in (0, 1)");

    const double ln2 = std::log(2.0);
    double m_exact = -(static_cast<double>(n_items) * std::log(target_fp)) / (ln2 * ln2);
    auto m = static_cast<std::uint64_t>(std::ceil(m_exact));
    if (m < 1) m = 1;

    double k_exact = (static_cast<double>(m) / static_cast<double>(n_items)) * ln2;
    auto k = static_cast<std::uint64_t>(std::llround(k_exact));
    if (k < 1) k = 1;

    return {static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(k)};
}

BloomFilter::BloomFilter(BloomParams params) : params_(params) {
    BloomSize size = compute_size(params.n_items, params.target_fp);
    m_ = size.bits;
    k_ = size.hashes;
    bits_.assign(m_, 0);
}

void BloomFilter::insert(std::string_view item) {
    std::uint64_t h1 = hash_bytes(item, params_.seed);
    std::uint64_t h2 = hash_bytes(item, params_.seed ^ kSecondStreamSalt);
    for (std::uint32_t i = 0; i < k_; ++i) bits_[probe_position(h1, h2, i, m_)] = 1;
    ++inserted_;
    if (inserted_ > params_.n_items) ++saturation_;
}

bool BloomFilter::query(std::string_view item) const {
    std::uint64_t h1 = hash_bytes(item, params_.seed);
    std::uint64_t h2 = hash_bytes(item, params_.seed ^ kSecondStreamSalt);
    for (std::uint32_t i = 0; i < k_; ++i) {
        if (!bits_[probe_position(h1, h2, i, m_)]) return false;
    }
    return true;
}

BloomFilter BloomFilter::perturb(double flip_pct, std::uint64_t rng_seed) const {
    if (!(flip_pct >= 0.0) || !(flip_pct <= 100.0))
        throw std::invalid_argument("perturb: flip_pct must be in [0, 100]");

    auto flips = static_cast<std::uint32_t>(
        std::llround(flip_pct * static_cast<double>(m_) / 100.0));

    BloomFilter out = *this;
    if (flips == 0) return out;

    RandomStream rng(rng_seed);
    for (std::uint32_t pos : rng.sample_indices(m_, flips)) out.bits_[pos] ^= 1u;
    return out;
}

ChunkedState BloomFilter::to_chunks() const {
    ChunkedState state;
    state.pad_bits = (32u - m_ % 32u) % 32u;
    std::uint32_t total = m_ + state.pad_bits;
    state.chunks.assign(total / 32u, 0u);
    for (std::uint32_t i = 0; i < m_; ++i) {
        if (!bits_[i]) continue;
        std::uint32_t padded = i + state.pad_bits;  // bit 0 of the padded stream is MSB
        state.chunks[padded / 32u] |= 0x80000000u >> (padded % 32u);
    }
    return state;
}

std::vector<std::uint8_t> ChunkedState::unpack() const {
    std::uint32_t total = static_cast<std::uint32_t>(chunks.size()) * 32u;
    std::vector<std::uint8_t> out;
    out.reserve(total - pad_bits);
    for (std::uint32_t padded = pad_bits; padded < total; ++padded) {
        std::uint32_t chunk = chunks[padded / 32u];
        out.push_back((chunk >> (31u - padded % 32u)) & 1u);
    }
    return out;
}

std::uint32_t BloomFilter::set_bit_count() const {
    std::uint32_t n = 0;
    for (auto b : bits_) n += b;
    return n;
}

}  // namespace bloomflow
