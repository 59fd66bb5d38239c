#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace bloomflow {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// splitmix64 finalizer; full avalanche on 64 bits.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derive a child seed from (seed, value). Chain for composite coordinates,
/// e.g. combine_seed(master, cell_index, trial_index).
inline std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value) {
    return mix64(seed + kGolden + mix64(value + kGolden));
}

template <typename... Rest>
std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value, std::uint64_t next,
                           Rest... rest) {
    return combine_seed(combine_seed(seed, value), next, rest...);
}

/// Seeded FNV-1a over bytes with a splitmix finalizer. Stable across
/// platforms; two independent streams are obtained by xoring the seed
/// with distinct constants.
inline std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = 1469598103934665603ULL ^ mix64(seed);
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return mix64(h);
}

/// Deterministic splitmix64 generator. Used instead of <random>
/// distributions so that outputs are bit-identical everywhere.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(mix64(seed ^ kGolden)) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Modulo bias is negligible for n << 2^64.
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("next_below: n must be positive");
        return next_u64() % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// k distinct indices sampled uniformly from [0, n), via partial
    /// Fisher-Yates. Order of the returned indices is the draw order.
    std::vector<std::uint32_t> sample_indices(std::uint32_t n, std::uint32_t k) {
        if (k > n) throw std::invalid_argument("sample_indices: k > n");
        std::vector<std::uint32_t> pool(n);
        std::iota(pool.begin(), pool.end(), 0u);
        for (std::uint32_t i = 0; i < k; ++i) {
            std::uint32_t j = i + static_cast<std::uint32_t>(next_below(n - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

private:
    std::uint64_t state_;
};

}  // namespace bloomflow
