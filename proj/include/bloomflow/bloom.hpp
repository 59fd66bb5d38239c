#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "bloomflow/rng.hpp"

namespace bloomflow {

struct BloomParams {
    std::uint64_t n_items = 1;    // items the filter is sized for
    double target_fp = 0.01;      // target false-positive probability, in (0,1)
    std::uint64_t seed = 0;       // hash-family seed
};

struct BloomSize {
    std::uint32_t bits;    // m
    std::uint32_t hashes;  // k
};

/// m = ceil(-n ln P / (ln 2)^2), k = max(1, round((m/n) ln 2)).
/// Throws std::invalid_argument outside n >= 1, 0 < P < 1.
BloomSize compute_size(std::uint64_t n_items, double target_fp);

/// Bit array exported as 32-bit integers, most significant chunk first,
/// with pad_bits leading zeros prepended so 32 * chunks == m + pad_bits.
struct ChunkedState {
    std::vector<std::uint32_t> chunks;
    std::uint32_t pad_bits = 0;

    /// Inverse of BloomFilter::to_chunks: strip the pad, recover the bits.
    std::vector<std::uint8_t> unpack() const;
};

/// Seedable Bloom filter over strings. Positions come from double hashing:
/// position_i = (h1 + i*h2) mod m for i in [0, k). Deterministic for a
/// given (params, insertion order). Single writer; concurrent reads are
/// safe once construction and inserts are done.
class BloomFilter {
public:
    explicit BloomFilter(BloomParams params);

    void insert(std::string_view item);
    bool query(std::string_view item) const;

    /// Copy with exactly round(flip_pct * m / 100) distinct bit positions
    /// inverted, sampled uniformly without replacement from rng_seed.
    /// Throws std::invalid_argument for flip_pct outside [0, 100].
    BloomFilter perturb(double flip_pct, std::uint64_t rng_seed) const;

    ChunkedState to_chunks() const;

    const BloomParams& params() const { return params_; }
    std::uint32_t bit_count() const { return m_; }
    std::uint32_t hash_count() const { return k_; }
    /// Index 0 is the most significant position for chunk export.
    const std::vector<std::uint8_t>& bits() const { return bits_; }
    std::uint64_t inserted_count() const { return inserted_; }
    /// Inserts beyond n_items; a guard counter, not an error.
    std::uint64_t saturation_warnings() const { return saturation_; }
    std::uint32_t set_bit_count() const;

private:
    BloomParams params_;
    std::uint32_t m_ = 0;
    std::uint32_t k_ = 0;
    std::vector<std::uint8_t> bits_;  // one byte per bit position
    std::uint64_t inserted_ = 0;
    std::uint64_t saturation_ = 0;
};

}  // namespace bloomflow
